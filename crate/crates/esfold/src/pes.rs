//! Prime event structures: causality plus symmetric hereditary conflict.

use crate::aes::Aes;
use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::fes::Fes;
use crate::validate::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pes {
    events: Events,
    /// Reflexive-transitive causality (when built through [`Pes::build`]).
    le: Relation,
    /// Symmetric irreflexive conflict.
    conflict: Relation,
}

impl Pes {
    /// Builds a structure from direct causality edges and conflict pairs.
    ///
    /// Causality is closed reflexively and transitively; a causality cycle
    /// is rejected. Conflict is symmetrized. The result is validated and a
    /// violation report turns into an error.
    pub fn build(
        events: Events,
        causality: &[(usize, usize)],
        conflicts: &[(usize, usize)],
    ) -> Result<Pes> {
        let n = events.len();
        let mut le = Relation::from_pairs(n, causality);
        le.reflexive_close();
        le.transitive_close();
        for a in 0..n {
            for b in 0..n {
                if a != b && le.contains(a, b) && le.contains(b, a) {
                    return Err(Error::CausalityCycle {
                        event: events.name(a).to_string(),
                    });
                }
            }
        }
        let mut conflict = Relation::from_pairs(n, conflicts);
        conflict.symmetrize();
        let pes = Pes { events, le, conflict };
        let report = pes.validate();
        if report.is_valid() {
            Ok(pes)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    /// Convenience builder over event names.
    pub fn build_named(
        events: &[(&str, &str)],
        causality: &[(&str, &str)],
        conflicts: &[(&str, &str)],
    ) -> Result<Pes> {
        let table = Events::new(events)?;
        let to_pairs = |edges: &[(&str, &str)]| -> Result<Vec<(usize, usize)>> {
            edges
                .iter()
                .map(|(a, b)| {
                    let ia = table
                        .index_of(a)
                        .ok_or_else(|| Error::UnknownEvent { event: a.to_string() })?;
                    let ib = table
                        .index_of(b)
                        .ok_or_else(|| Error::UnknownEvent { event: b.to_string() })?;
                    Ok((ia, ib))
                })
                .collect()
        };
        let c = to_pairs(causality)?;
        let k = to_pairs(conflicts)?;
        Pes::build(table, &c, &k)
    }

    /// Wraps the given relations verbatim, without closure or validation.
    /// Used to exercise the validator on broken structures.
    pub fn from_raw(events: Events, le: Relation, conflict: Relation) -> Pes {
        Pes { events, le, conflict }
    }

    pub fn events(&self) -> &Events {
        &self.events
    }

    pub fn causality(&self) -> &Relation {
        &self.le
    }

    pub fn conflict(&self) -> &Relation {
        &self.conflict
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le.contains(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le.contains(a, b)
    }

    pub fn in_conflict(&self, a: usize, b: usize) -> bool {
        self.conflict.contains(a, b)
    }

    /// Causal past of `e`, including `e`.
    pub fn below(&self, e: usize) -> EventSet {
        self.le.column(e)
    }

    /// Checks every clause and reports each violation with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let n = self.events.len();
        let mut rep = ValidationReport::default();
        for i in 0..n {
            if !self.le.contains(i, i) {
                rep.push(Violation::OrderNotReflexive {
                    event: self.events.name(i).to_string(),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le.contains(a, b) && self.le.contains(b, a)
                    && a < b {
                        rep.push(Violation::OrderNotAntisymmetric {
                            a: self.events.name(a).to_string(),
                            b: self.events.name(b).to_string(),
                        });
                    }
            }
        }
        for a in 0..n {
            for b in self.le.row(a).iter() {
                for c in self.le.row(b).iter() {
                    if !self.le.contains(a, c) {
                        rep.push(Violation::OrderNotTransitive {
                            a: self.events.name(a).to_string(),
                            b: self.events.name(b).to_string(),
                            c: self.events.name(c).to_string(),
                        });
                    }
                }
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
        // Heredity: a # b <= c demands a # c.
        for a in 0..n {
            for b in self.conflict.row(a).iter() {
                for c in self.le.row(b).iter() {
                    if c != b && !self.conflict.contains(a, c) {
                        rep.push(Violation::ConflictNotHereditary {
                            a: self.events.name(a).to_string(),
                            b: self.events.name(b).to_string(),
                            c: self.events.name(c).to_string(),
                        });
                    }
                }
            }
        }
        rep
    }

    /// Embedding with the conflict relation doubled into opposing arrows.
    pub fn to_aes(&self) -> Result<Aes> {
        let n = self.events.len();
        let mut aconf = Relation::new(n);
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) || self.in_conflict(a, b) {
                    aconf.insert(a, b);
                }
            }
        }
        Aes::build_closed(self.events.clone(), self.le.clone(), aconf)
    }

    /// Embedding with flow as the transitive reduction of strict causality.
    pub fn to_fes(&self) -> Result<Fes> {
        let n = self.events.len();
        let mut strict = self.le.clone();
        for i in 0..n {
            strict.remove(i, i);
        }
        let flow = strict.transitive_reduction();
        Fes::build(self.events.clone(), flow, self.conflict.clone())
    }
}
