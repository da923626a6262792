//! Flow event structures: an intransitive flow of possible direct causes
//! plus symmetric conflict. An event fires after a maximal conflict-free
//! subset of its flow predecessors, which is how disjunctive causality is
//! expressed.

use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::validate::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fes {
    events: Events,
    /// Irreflexive flow; deliberately not closed under anything.
    flow: Relation,
    /// Symmetric irreflexive conflict.
    conflict: Relation,
}

impl Fes {
    /// Builds from flow edges and conflict pairs. Conflict is symmetrized;
    /// the structural axioms are then checked.
    pub fn build(events: Events, flow: Relation, mut conflict: Relation) -> Result<Fes> {
        conflict.symmetrize();
        let fes = Fes { events, flow, conflict };
        let report = fes.validate();
        if report.is_valid() {
            Ok(fes)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    pub fn build_named(
        events: &[(&str, &str)],
        flow: &[(&str, &str)],
        conflicts: &[(&str, &str)],
    ) -> Result<Fes> {
        let table = Events::new(events)?;
        let to_rel = |edges: &[(&str, &str)]| -> Result<Relation> {
            let mut r = Relation::new(table.len());
            for (a, b) in edges {
                let ia = table
                    .index_of(a)
                    .ok_or_else(|| Error::UnknownEvent { event: a.to_string() })?;
                let ib = table
                    .index_of(b)
                    .ok_or_else(|| Error::UnknownEvent { event: b.to_string() })?;
                r.insert(ia, ib);
            }
            Ok(r)
        };
        let f = to_rel(flow)?;
        let c = to_rel(conflicts)?;
        Fes::build(table, f, c)
    }

    /// Wraps relations verbatim for validator tests.
    pub fn from_raw(events: Events, flow: Relation, conflict: Relation) -> Fes {
        Fes { events, flow, conflict }
    }

    pub fn events(&self) -> &Events {
        &self.events
    }

    pub fn flow(&self) -> &Relation {
        &self.flow
    }

    pub fn conflict(&self) -> &Relation {
        &self.conflict
    }

    pub fn in_conflict(&self, a: usize, b: usize) -> bool {
        self.conflict.contains(a, b)
    }

    /// Flow predecessors of one event.
    pub fn pre(&self, e: usize) -> EventSet {
        self.flow.column(e)
    }

    /// Flow predecessors of a set (union over members).
    pub fn pre_set(&self, set: EventSet) -> EventSet {
        let mut out = EventSet::EMPTY;
        for e in set.iter() {
            out = out.union(self.pre(e));
        }
        out
    }

    /// Structural axioms only; joint-executability checks live in the
    /// semantics module because they enumerate configurations.
    pub fn validate(&self) -> ValidationReport {
        let n = self.events.len();
        let mut rep = ValidationReport::default();
        for i in 0..n {
            if self.flow.contains(i, i) {
                rep.push(Violation::FlowReflexive {
                    event: self.events.name(i).to_string(),
                });
            }
        }
        for i in 0..n {
            if self.conflict.contains(i, i) {
                rep.push(Violation::ConflictReflexive {
                    event: self.events.name(i).to_string(),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.conflict.contains(a, b) && !self.conflict.contains(b, a) {
                    rep.push(Violation::ConflictNotSymmetric {
                        a: self.events.name(a).to_string(),
                        b: self.events.name(b).to_string(),
                    });
                }
            }
        }
        rep
    }
}
