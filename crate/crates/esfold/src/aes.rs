//! Event structures with asymmetric conflict.
//!
//! The weak-precedence arrow `a -> b` reads both as "b disables a" and as
//! "a precedes b wherever both occur". Causality is contained in the arrow
//! relation, arrows are hereditary along causality, the arrows below any
//! single event are acyclic, and a cyclic restriction below a pair forces
//! the direct arrow between its members.

use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::validate::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aes {
    events: Events,
    /// Reflexive-transitive causality (when built through [`Aes::build`]).
    le: Relation,
    /// Asymmetric conflict arrows; contains all strict causal pairs.
    aconf: Relation,
}

impl Aes {
    /// Builds from direct causality and arrow pairs.
    ///
    /// Causality is closed reflexively and transitively (cycles rejected).
    /// Arrows gain every strict causal pair and are closed hereditarily
    /// (`a -> b < c` adds `a -> c`), matching the convention that drawn
    /// relations are the direct ones. Acyclicity-below and saturation must
    /// hold as given; violations turn into an error.
    pub fn build(
        events: Events,
        causality: &[(usize, usize)],
        arrows: &[(usize, usize)],
    ) -> Result<Aes> {
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
        Aes::build_closed(events, le, Relation::from_pairs(n, arrows))
    }

    /// Shared tail of the builders: closes the arrow relation over an
    /// already-closed causality, then validates.
    pub(crate) fn build_closed(events: Events, le: Relation, mut aconf: Relation) -> Result<Aes> {
        let n = events.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && le.contains(a, b) {
                    aconf.insert(a, b);
                }
            }
        }
        // Hereditary closure: a -> b and b < c gives a -> c.
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in aconf.row(a).iter().collect::<Vec<_>>() {
                    for c in le.row(b).iter() {
                        if c != b && !aconf.contains(a, c) {
                            aconf.insert(a, c);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let aes = Aes { events, le, aconf };
        let report = aes.validate();
        if report.is_valid() {
            Ok(aes)
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    pub fn build_named(
        events: &[(&str, &str)],
        causality: &[(&str, &str)],
        arrows: &[(&str, &str)],
    ) -> Result<Aes> {
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
        let ar = to_pairs(arrows)?;
        Aes::build(table, &c, &ar)
    }

    /// Wraps relations verbatim for validator tests.
    pub fn from_raw(events: Events, le: Relation, aconf: Relation) -> Aes {
        Aes { events, le, aconf }
    }

    pub fn events(&self) -> &Events {
        &self.events
    }

    pub fn causality(&self) -> &Relation {
        &self.le
    }

    pub fn aconflict(&self) -> &Relation {
        &self.aconf
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le.contains(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le.contains(a, b)
    }

    pub fn arrow(&self, a: usize, b: usize) -> bool {
        self.aconf.contains(a, b)
    }

    /// Causal past of `e`, including `e`.
    pub fn below(&self, e: usize) -> EventSet {
        self.le.column(e)
    }

    /// Downward causal closure of a set.
    pub fn down_closure(&self, set: EventSet) -> EventSet {
        let mut out = EventSet::EMPTY;
        for e in set.iter() {
            out = out.union(self.below(e));
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.events.len();
        let mut rep = ValidationReport::default();
        let name = |i: usize| self.events.name(i).to_string();

        for i in 0..n {
            if !self.le.contains(i, i) {
                rep.push(Violation::OrderNotReflexive { event: name(i) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a < b && self.le.contains(a, b) && self.le.contains(b, a) {
                    rep.push(Violation::OrderNotAntisymmetric { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..n {
            for b in self.le.row(a).iter() {
                for c in self.le.row(b).iter() {
                    if !self.le.contains(a, c) {
                        rep.push(Violation::OrderNotTransitive {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        // Strict causality must be contained in the arrows.
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !self.arrow(a, b) {
                    rep.push(Violation::CausalityNotInAconflict { a: name(a), b: name(b) });
                }
            }
        }
        // Heredity of arrows along causality.
        for a in 0..n {
            for b in self.aconf.row(a).iter() {
                for c in self.le.row(b).iter() {
                    if c != b && !self.arrow(a, c) {
                        rep.push(Violation::AconflictNotHereditary {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        // Acyclicity below each event.
        for e in 0..n {
            if !self.aconf.is_acyclic_on(self.below(e)) {
                rep.push(Violation::AconflictCyclicBelow { event: name(e) });
            }
        }
        // Saturation: a cyclic restriction below a pair forces the arrow.
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let both = self.below(a).union(self.below(b));
                if !self.aconf.is_acyclic_on(both) && !self.arrow(a, b) {
                    rep.push(Violation::AconflictNotSaturated { a: name(a), b: name(b) });
                }
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_causal_arrow_is_condition_one_violation() {
        let events = Events::new(&[("a", "a"), ("b", "b")]).unwrap();
        let mut le = Relation::identity(2);
        le.insert(0, 1);
        let aes = Aes::from_raw(events, le, Relation::new(2));
        let rep = aes.validate();
        assert!(rep
            .violations
            .contains(&Violation::CausalityNotInAconflict { a: "a".into(), b: "b".into() }));
    }

    #[test]
    fn missing_inherited_arrow_is_condition_two_violation() {
        // a -> b, b < c, no a -> c.
        let events = Events::new(&[("a", "a"), ("b", "b"), ("c", "c")]).unwrap();
        let mut le = Relation::identity(3);
        le.insert(1, 2);
        let mut aconf = Relation::new(3);
        aconf.insert(0, 1);
        aconf.insert(1, 2);
        let aes = Aes::from_raw(events, le, aconf);
        let rep = aes.validate();
        assert!(rep.violations.contains(&Violation::AconflictNotHereditary {
            a: "a".into(),
            b: "b".into(),
            c: "c".into(),
        }));
    }

    #[test]
    fn builder_closes_heredity() {
        // a -> b plus b < c must yield a -> c after construction.
        let aes = Aes::build_named(
            &[("a", "a"), ("b", "b"), ("c", "c")],
            &[("b", "c")],
            &[("a", "b")],
        )
        .unwrap();
        assert!(aes.arrow(0, 2));
        assert!(aes.validate().is_valid());
    }
}
