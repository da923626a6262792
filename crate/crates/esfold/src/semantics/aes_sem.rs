//! Histories, direct relations and conflict notions for structures with
//! asymmetric conflict.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::aes::Aes;
use crate::error::Result;
use crate::events::{EventSet, Relation};
use crate::semantics::{configurations, guard_cap};
use crate::structure::EventStructure;

/// The part of configuration `c` that must precede `e` inside it: all
/// members reaching `e` through arrows restricted to `c`, plus `e`.
pub fn history_within(a: &Aes, c: EventSet, e: usize) -> EventSet {
    debug_assert!(c.contains(e));
    let star = a.aconflict().star_within(c);
    let mut h = EventSet::EMPTY;
    for x in c.iter() {
        if star.contains(x, e) {
            h.insert(x);
        }
    }
    h
}

/// All possible histories of `e`: the per-configuration pasts of `e`
/// across every configuration containing it. Sorted by size then mask.
pub fn histories(a: &Aes, e: usize, cap: usize) -> Result<Vec<EventSet>> {
    let s = EventStructure::Aes(a.clone());
    let fam = configurations(&s, cap)?;
    let mut out: BTreeSet<(usize, u64)> = BTreeSet::new();
    for c in fam.iter() {
        if c.contains(e) {
            let h = history_within(a, c, e);
            out.insert((h.len(), h.0));
        }
    }
    Ok(out.into_iter().map(|(_, m)| EventSet(m)).collect())
}

/// Union of the histories of every member of `xs`.
pub fn histories_of_set(a: &Aes, xs: EventSet, cap: usize) -> Result<EventSet> {
    let mut out = EventSet::EMPTY;
    for e in xs.iter() {
        for h in histories(a, e, cap)? {
            out = out.union(h);
        }
    }
    Ok(out)
}

/// Immediate causality and non-inherited arrows.
#[derive(Debug, Clone)]
pub struct DirectRelations {
    /// `(a, b)` when `a < b` with nothing strictly between.
    pub imm_cause: Relation,
    /// `(a, b)` when `a -> b` and no `z` has `a -> z < b`.
    pub direct_arrow: Relation,
    /// Mutual direct arrows.
    pub direct_conflict: Relation,
}

pub fn direct_relations(a: &Aes) -> DirectRelations {
    let n = a.events().len();
    let mut imm = Relation::new(n);
    for x in 0..n {
        for y in 0..n {
            if a.lt(x, y) && !(0..n).any(|z| a.lt(x, z) && a.lt(z, y)) {
                imm.insert(x, y);
            }
        }
    }
    let mut dir = Relation::new(n);
    for x in 0..n {
        for y in 0..n {
            if a.arrow(x, y) && !(0..n).any(|z| a.arrow(x, z) && a.lt(z, y)) {
                dir.insert(x, y);
            }
        }
    }
    let mut dconf = Relation::new(n);
    for x in 0..n {
        for y in 0..n {
            if dir.contains(x, y) && dir.contains(y, x) {
                dconf.insert(x, y);
            }
        }
    }
    DirectRelations { imm_cause: imm, direct_arrow: dir, direct_conflict: dconf }
}

/// Whether `a -> b` is direct (no arrow into a strict cause of `b`).
pub fn is_direct_arrow(a: &Aes, x: usize, y: usize) -> bool {
    a.arrow(x, y) && !(0..a.events().len()).any(|z| a.arrow(x, z) && a.lt(z, y))
}

/// Binary conflict: arrows in both directions. By saturation this is the
/// same as the arrows below the pair being cyclic.
pub fn binary_conflict(a: &Aes, x: usize, y: usize) -> bool {
    a.arrow(x, y) && a.arrow(y, x)
}

/// A set can occur inside some configuration exactly when the arrows
/// restricted to its downward closure are acyclic.
pub fn is_consistent(a: &Aes, set: EventSet) -> bool {
    a.aconflict().is_acyclic_on(a.down_closure(set))
}

/// Conflict over a set of events, derived as a least fixed point of two
/// rules inside the downward closure of `xs`: the members of any arrow
/// cycle form a conflict set, and a conflict set stays one when a member
/// is traded for a causal successor (the member may also be kept). The
/// query holds when some derivable conflict set lies inside `xs`, which
/// coincides with `xs` fitting in no configuration.
pub fn set_conflict(a: &Aes, xs: EventSet, cap: usize) -> Result<bool> {
    if xs.is_empty() {
        return Ok(false);
    }
    let universe = a.down_closure(xs);
    guard_cap(universe.len(), cap)?;

    let mut derivable: HashSet<u64> = HashSet::new();
    let mut queue: VecDeque<EventSet> = VecDeque::new();
    for s in universe.subsets() {
        if !s.is_empty() && a.aconflict().is_cyclically_connected_on(s)
            && derivable.insert(s.0) {
                if s.is_subset(xs) {
                    return Ok(true);
                }
                queue.push_back(s);
            }
    }
    while let Some(s) = queue.pop_front() {
        for e in s.iter() {
            for e2 in universe.iter() {
                if a.lt(e, e2) {
                    for t in [s.with(e2), s.without(e).with(e2)] {
                        if derivable.insert(t.0) {
                            if t.is_subset(xs) {
                                return Ok(true);
                            }
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_CAP;

    fn chain() -> Aes {
        Aes::build_named(
            &[("a", "a"), ("b", "b"), ("c", "c")],
            &[("a", "b"), ("b", "c")],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn chain_has_immediate_causes_only_between_neighbours() {
        let a = chain();
        let d = direct_relations(&a);
        assert!(d.imm_cause.contains(0, 1));
        assert!(d.imm_cause.contains(1, 2));
        assert!(!d.imm_cause.contains(0, 2));
    }

    #[test]
    fn inherited_arrow_is_not_direct() {
        // e -> e' and e' < e''; heredity adds e -> e'' which is inherited.
        let a = Aes::build_named(
            &[("e", "e"), ("ep", "f"), ("epp", "g")],
            &[("ep", "epp")],
            &[("e", "ep")],
        )
        .unwrap();
        assert!(a.arrow(0, 2));
        let d = direct_relations(&a);
        assert!(d.direct_arrow.contains(0, 1));
        assert!(!d.direct_arrow.contains(0, 2));
    }

    #[test]
    fn mutual_direct_arrows_are_a_direct_conflict() {
        let a = Aes::build_named(
            &[("e", "e"), ("epp", "g")],
            &[],
            &[("e", "epp"), ("epp", "e")],
        )
        .unwrap();
        let d = direct_relations(&a);
        assert!(d.direct_conflict.contains(0, 1));
        assert!(d.direct_conflict.contains(1, 0));
    }

    #[test]
    fn unique_history_without_asymmetric_conflict() {
        // Purely causal structure: the only history of c is its past.
        let a = chain();
        let hs = histories(&a, 2, DEFAULT_CAP).unwrap();
        assert_eq!(hs, vec![EventSet::from_iter([0, 1, 2])]);
    }

    #[test]
    fn singleton_set_is_never_in_conflict() {
        let a = chain();
        assert!(!set_conflict(&a, EventSet::singleton(0), DEFAULT_CAP).unwrap());
    }

    #[test]
    fn mutual_arrows_give_binary_set_conflict() {
        let a = Aes::build_named(
            &[("x", "x"), ("y", "x")],
            &[],
            &[("x", "y"), ("y", "x")],
        )
        .unwrap();
        assert!(set_conflict(&a, EventSet::from_iter([0, 1]), DEFAULT_CAP).unwrap());
        assert!(binary_conflict(&a, 0, 1));
    }
}
