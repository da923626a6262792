//! A variant-dispatching wrapper plus the per-variant configuration
//! predicates, extension orders and induced local orders that the
//! semantics, equivalence and reduction layers build on.

use crate::aes::Aes;
use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::fes::Fes;
use crate::pes::Pes;
use crate::validate::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Pes,
    Aes,
    Fes,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Pes => "pes",
            Kind::Aes => "aes",
            Kind::Fes => "fes",
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventStructure {
    Pes(Pes),
    Aes(Aes),
    Fes(Fes),
}

impl From<Pes> for EventStructure {
    fn from(p: Pes) -> Self {
        EventStructure::Pes(p)
    }
}
impl From<Aes> for EventStructure {
    fn from(a: Aes) -> Self {
        EventStructure::Aes(a)
    }
}
impl From<Fes> for EventStructure {
    fn from(f: Fes) -> Self {
        EventStructure::Fes(f)
    }
}

impl EventStructure {
    pub fn kind(&self) -> Kind {
        match self {
            EventStructure::Pes(_) => Kind::Pes,
            EventStructure::Aes(_) => Kind::Aes,
            EventStructure::Fes(_) => Kind::Fes,
        }
    }

    pub fn events(&self) -> &Events {
        match self {
            EventStructure::Pes(p) => p.events(),
            EventStructure::Aes(a) => a.events(),
            EventStructure::Fes(f) => f.events(),
        }
    }

    pub fn as_aes(&self) -> Result<&Aes> {
        match self {
            EventStructure::Aes(a) => Ok(a),
            other => Err(Error::KindMismatch {
                expected: "aes".into(),
                got: other.kind().to_string(),
            }),
        }
    }

    pub fn as_fes(&self) -> Result<&Fes> {
        match self {
            EventStructure::Fes(f) => Ok(f),
            other => Err(Error::KindMismatch {
                expected: "fes".into(),
                got: other.kind().to_string(),
            }),
        }
    }

    pub fn as_pes(&self) -> Result<&Pes> {
        match self {
            EventStructure::Pes(p) => Ok(p),
            other => Err(Error::KindMismatch {
                expected: "pes".into(),
                got: other.kind().to_string(),
            }),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            EventStructure::Pes(p) => p.validate(),
            EventStructure::Aes(a) => a.validate(),
            EventStructure::Fes(f) => f.validate(),
        }
    }

    /// The relations that an isomorphism must preserve and reflect, in a
    /// fixed order per variant.
    pub fn relations(&self) -> [&Relation; 2] {
        match self {
            EventStructure::Pes(p) => [p.causality(), p.conflict()],
            EventStructure::Aes(a) => [a.causality(), a.aconflict()],
            EventStructure::Fes(f) => [f.flow(), f.conflict()],
        }
    }

    /// The variant's configuration predicate.
    pub fn is_configuration(&self, c: EventSet) -> bool {
        match self {
            EventStructure::Pes(p) => {
                c.iter().all(|e| p.below(e).is_subset(c))
                    && c.iter()
                        .all(|a| p.conflict().row(a).intersect(c).is_empty())
            }
            EventStructure::Aes(a) => {
                c.iter().all(|e| a.below(e).is_subset(c)) && a.aconflict().is_acyclic_on(c)
            }
            EventStructure::Fes(f) => {
                let conflict_free = c
                    .iter()
                    .all(|a| f.conflict().row(a).intersect(c).is_empty());
                if !conflict_free {
                    return false;
                }
                if !f.flow().is_acyclic_on(c) {
                    return false;
                }
                // Every missing flow predecessor must be excluded by a
                // conflicting co-predecessor inside the set.
                c.iter().all(|e| {
                    f.pre(e).minus(c).iter().all(|w| {
                        f.conflict()
                            .row(w)
                            .intersect(c)
                            .iter()
                            .any(|v| f.flow().contains(v, e))
                    })
                })
            }
        }
    }

    /// Events that extend configuration `c` by one step of the variant's
    /// extension order into another configuration.
    pub fn extension_events(&self, c: EventSet) -> EventSet {
        let n = self.events().len();
        let mut out = EventSet::EMPTY;
        for e in 0..n {
            if c.contains(e) {
                continue;
            }
            let ok = match self {
                EventStructure::Pes(p) => {
                    p.below(e).without(e).is_subset(c)
                        && p.conflict().row(e).intersect(c).is_empty()
                }
                EventStructure::Aes(a) => {
                    a.below(e).without(e).is_subset(c)
                        && a.aconflict().row(e).intersect(c).is_empty()
                }
                EventStructure::Fes(f) => {
                    let consistent = f.conflict().row(e).intersect(c).is_empty();
                    consistent && {
                        let cn = c.with(e);
                        f.pre(e).minus(cn).iter().all(|w| {
                            f.conflict()
                                .row(w)
                                .intersect(cn)
                                .iter()
                                .any(|v| f.flow().contains(v, e))
                        })
                    }
                }
            };
            if ok {
                debug_assert!(self.is_configuration(c.with(e)));
                out.insert(e);
            }
        }
        out
    }

    /// The extension order between configurations: plain inclusion, except
    /// that a structure with asymmetric conflict additionally forbids
    /// adding events that disable something already present.
    pub fn extends_to(&self, c1: EventSet, c2: EventSet) -> bool {
        if !c1.is_subset(c2) {
            return false;
        }
        match self {
            EventStructure::Aes(a) => {
                let added = c2.minus(c1);
                added
                    .iter()
                    .all(|b| a.aconflict().row(b).intersect(c1).is_empty())
            }
            _ => true,
        }
    }

    /// Induced order on the events of a configuration, reflexive within it.
    pub fn local_order(&self, c: EventSet) -> Relation {
        match self {
            EventStructure::Pes(p) => p.causality().restricted_to(c),
            EventStructure::Aes(a) => a.aconflict().star_within(c),
            EventStructure::Fes(f) => f.flow().star_within(c),
        }
    }

    pub fn set_names(&self, c: EventSet) -> Vec<String> {
        self.events().set_names(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pes_configuration_predicate() {
        let p = Pes::build_named(
            &[("a", "a"), ("b", "b"), ("c", "c")],
            &[("a", "b")],
            &[("b", "c")],
        )
        .unwrap();
        let s = EventStructure::from(p);
        assert!(s.is_configuration(EventSet::EMPTY));
        assert!(s.is_configuration(EventSet::from_iter([0, 1])));
        assert!(!s.is_configuration(EventSet::from_iter([1]))); // not closed
        assert!(!s.is_configuration(EventSet::from_iter([0, 1, 2]))); // conflict
    }

    #[test]
    fn aes_extension_respects_disabling() {
        // b -> a: adding b to {a} is not an extension step.
        let a = Aes::build_named(&[("a", "a"), ("b", "b")], &[], &[("b", "a")]).unwrap();
        let s = EventStructure::from(a);
        let exts = s.extension_events(EventSet::from_iter([0]));
        assert!(!exts.contains(1));
        let exts = s.extension_events(EventSet::from_iter([1]));
        assert!(exts.contains(0));
        assert!(s.extends_to(EventSet::from_iter([1]), EventSet::from_iter([0, 1])));
        assert!(!s.extends_to(EventSet::from_iter([0]), EventSet::from_iter([0, 1])));
    }

    #[test]
    fn fes_missing_predecessor_needs_conflicting_witness() {
        // b flows into c, d # b flows into c: c can fire with d alone.
        let f = Fes::build_named(
            &[("b", "b"), ("c", "c"), ("d", "d")],
            &[("b", "c"), ("d", "c")],
            &[("b", "d")],
        )
        .unwrap();
        let s = EventStructure::from(f);
        assert!(s.is_configuration(EventSet::from_iter([1, 2]))); // {d, c}
        assert!(!s.is_configuration(EventSet::from_iter([1]))); // {c} alone
    }
}
