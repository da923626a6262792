//! Merging same-label events of a flow event structure. The gate has five
//! conditions; the last one protects the maximal consistent predecessor
//! sets of downstream events from losing a conflict in the merge.

use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::fes::Fes;
pub use crate::semantics::fes_sem::conflict_set;
use crate::semantics::fes_sem::{direct_conflict, mcons};

pub use crate::aes_fold::FoldingMap;

/// Why a condition failed, with the witnessing events (names).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FesViolation {
    /// Members `x`, `x2` with different labels or no conflict.
    LabelOrConflict { x: String, x2: String },
    /// `x` is in direct conflict with `e` but `x2` is not in conflict.
    DirectConflictLost { x: String, e: String, x2: String },
    /// `x` flows into `e` but `x2` neither flows into it nor conflicts it.
    SuccessorLost { x: String, e: String, x2: String },
    /// `e` flows into `x` but `x2` has no predecessors at all.
    PredecessorEmpty { e: String, x: String, x2: String },
    /// `e` flows into `x`, not into `x2`, and some predecessor of `x2`
    /// escapes the conflict with `e`.
    PredecessorUncovered { e: String, x: String, x2: String, via: String },
    /// A maximal consistent predecessor set of `e` relies solely on the
    /// conflict between `x` and `e2`, which the merge would lose.
    EnablingUnprotected { x: String, e: String, e2: String, subset: Vec<String> },
    /// A predecessor of `x` that `x2` lacks slips into an enabling of
    /// `x2`, so merging would make it mandatory there.
    ForeignPredecessorUnexcluded { w: String, x: String, x2: String, subset: Vec<String> },
}

impl std::fmt::Display for FesViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use FesViolation::*;
        match self {
            LabelOrConflict { x, x2 } => {
                write!(f, "condition 1: {x} and {x2} lack equal labels or a conflict")
            }
            DirectConflictLost { x, e, x2 } => {
                write!(f, "condition 2: {x} directly conflicts {e} but {x2} does not conflict it")
            }
            SuccessorLost { x, e, x2 } => write!(
                f,
                "condition 3: {x} flows into {e} but {x2} neither flows into nor conflicts it"
            ),
            PredecessorEmpty { e, x, x2 } => write!(
                f,
                "condition 4: {e} flows into {x} but {x2} has no predecessors"
            ),
            PredecessorUncovered { e, x, x2, via } => write!(
                f,
                "condition 4: {e} flows into {x}, not into {x2}, and {via} escapes the conflict"
            ),
            EnablingUnprotected { x, e, e2, subset } => write!(
                f,
                "condition 5: enabling {{{}}} of {e} loses the conflict between {x} and {e2}",
                subset.join(",")
            ),
            ForeignPredecessorUnexcluded { w, x, x2, subset } => write!(
                f,
                "enabling preservation: {w} precedes {x} but nothing in the enabling {{{}}} of {x2} excludes it",
                subset.join(",")
            ),
        }
    }
}

/// Verdicts for the five gate conditions plus the enabling-preservation
/// check, each with its first violation.
///
/// The extra check closes a hole the five conditions leave open: when one
/// member's predecessor set strictly extends another's without conflicts
/// into the smaller member's enablings, the merge silently turns optional
/// causes into mandatory ones. Every maximal consistent predecessor set
/// of each member must therefore exclude the predecessors it does not
/// contain, which is exactly what keeps those sets maximal after the
/// union.
#[derive(Debug, Clone, Default)]
pub struct FesFoldingPlan {
    pub candidate: EventSet,
    pub conditions: [Option<FesViolation>; 5],
    pub enabling_preservation: Option<FesViolation>,
    pub combinable: bool,
    pub merged_name: String,
}

impl FesFoldingPlan {
    pub fn render(&self, f: &Fes) -> String {
        let mut s = String::new();
        let members = f.events().set_names(self.candidate).join(",");
        s.push_str(&format!(
            "candidate {{{members}}}: {}\n",
            if self.combinable { "combinable" } else { "not combinable" }
        ));
        for (i, c) in self.conditions.iter().enumerate() {
            match c {
                None => s.push_str(&format!("  condition {}: ok\n", i + 1)),
                Some(v) => s.push_str(&format!("  {v}\n")),
            }
        }
        match &self.enabling_preservation {
            None => s.push_str("  enabling preservation: ok\n"),
            Some(v) => s.push_str(&format!("  {v}\n")),
        }
        s
    }
}

/// True when every member of `x` conflicts `e`.
fn all_conflict(f: &Fes, x: EventSet, e: usize) -> bool {
    x.iter().all(|m| f.in_conflict(m, e))
}

/// Evaluates the five conditions for merging `x`.
pub fn is_combinable_fes(f: &Fes, x: EventSet) -> FesFoldingPlan {
    let name = |i: usize| f.events().name(i).to_string();
    let outside = f.events().all().minus(x);
    let mut conds: [Option<FesViolation>; 5] = Default::default();

    // 1: equal labels and pairwise conflict.
    'c1: for a in x.iter() {
        for b in x.iter() {
            if a != b
                && (f.events().label(a) != f.events().label(b) || !f.in_conflict(a, b))
            {
                conds[0] = Some(FesViolation::LabelOrConflict { x: name(a), x2: name(b) });
                break 'c1;
            }
        }
    }

    // 2: direct conflicts of a member are plain conflicts of the others.
    'c2: for a in x.iter() {
        for e in outside.iter() {
            if direct_conflict(f, a, e) {
                for b in x.iter() {
                    if b != a && !f.in_conflict(b, e) {
                        conds[1] = Some(FesViolation::DirectConflictLost {
                            x: name(a),
                            e: name(e),
                            x2: name(b),
                        });
                        break 'c2;
                    }
                }
            }
        }
    }

    // 3: flow successors are shared or conflicted.
    'c3: for a in x.iter() {
        for e in outside.iter() {
            if f.flow().contains(a, e) {
                for b in x.iter() {
                    if b != a && !f.flow().contains(b, e) && !f.in_conflict(b, e) {
                        conds[2] = Some(FesViolation::SuccessorLost {
                            x: name(a),
                            e: name(e),
                            x2: name(b),
                        });
                        break 'c3;
                    }
                }
            }
        }
    }

    // 4: a predecessor of one member is a predecessor of the others, or
    // conflicts everything they add.
    'c4: for a in x.iter() {
        for e in f.pre(a).intersect(outside).iter() {
            for b in x.iter() {
                if b == a {
                    continue;
                }
                if f.pre(b).is_empty() {
                    conds[3] = Some(FesViolation::PredecessorEmpty {
                        e: name(e),
                        x: name(a),
                        x2: name(b),
                    });
                    break 'c4;
                }
                if f.flow().contains(e, b) {
                    continue;
                }
                let extra = f.pre(b).minus(f.pre(a)).intersect(outside);
                if let Some(via) = extra.iter().find(|&w| !f.in_conflict(e, w)) {
                    conds[3] = Some(FesViolation::PredecessorUncovered {
                        e: name(e),
                        x: name(a),
                        x2: name(b),
                        via: name(via),
                    });
                    break 'c4;
                }
            }
        }
    }

    // 5: maximal consistent predecessor sets of downstream events keep an
    // exclusion for every conflict the merge erases.
    'c5: for e in outside.iter() {
        let preds = f.pre(e);
        if preds.intersect(x).is_empty() {
            continue;
        }
        for a in preds.intersect(x).iter() {
            for e2 in preds.intersect(outside).iter() {
                if !f.in_conflict(a, e2) || all_conflict(f, x, e2) {
                    continue;
                }
                for y in mcons(f, preds) {
                    let bad_in = y.contains(a)
                        && !y
                            .without(a)
                            .iter()
                            .any(|w| f.in_conflict(w, e2));
                    let bad_out = y.intersect(x).is_empty()
                        && !y.iter().any(|w| all_conflict(f, x, w));
                    if bad_in || bad_out {
                        conds[4] = Some(FesViolation::EnablingUnprotected {
                            x: name(a),
                            e: name(e),
                            e2: name(e2),
                            subset: f.events().set_names(y),
                        });
                        break 'c5;
                    }
                }
            }
        }
    }

    // Enabling preservation: a predecessor of one member must be excluded
    // by every maximal consistent predecessor set of each member that
    // lacks it, or the merge makes it mandatory there.
    let mut enabling: Option<FesViolation> = None;
    'c6: for a in x.iter() {
        for b in x.iter() {
            if a == b {
                continue;
            }
            for w in f.pre(a).minus(f.pre(b)).intersect(outside).iter() {
                for y in mcons(f, f.pre(b)) {
                    if y.intersect(conflict_set(f, w)).is_empty() {
                        enabling = Some(FesViolation::ForeignPredecessorUnexcluded {
                            w: name(w),
                            x: name(a),
                            x2: name(b),
                            subset: f.events().set_names(y),
                        });
                        break 'c6;
                    }
                }
            }
        }
    }

    let combinable = x.len() >= 2 && conds.iter().all(Option::is_none) && enabling.is_none();
    FesFoldingPlan {
        candidate: x,
        conditions: conds,
        enabling_preservation: enabling,
        combinable,
        merged_name: merged_name_for(f, x),
    }
}

fn merged_name_for(f: &Fes, x: EventSet) -> String {
    let mut parts = f.events().set_names(x);
    parts.sort();
    let mut name = parts.join("+");
    while f.events().index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Replaces the candidate set by one event: conflicts survive only against
/// events conflicting every member, flow edges survive against events
/// flowing into or out of some member.
pub fn fold_fes(f: &Fes, plan: &FesFoldingPlan, force: bool) -> Result<(Fes, FoldingMap)> {
    if !plan.combinable && !force {
        return Err(Error::NotCombinable);
    }
    let x = plan.candidate;
    let n = f.events().len();
    let kept: Vec<usize> = (0..n).filter(|e| !x.contains(*e)).collect();
    let merged = kept.len();
    let mut forward = vec![usize::MAX; n];
    for (new, &old) in kept.iter().enumerate() {
        forward[old] = new;
    }
    for e in x.iter() {
        forward[e] = merged;
    }

    let mut table: Vec<(String, String)> = kept
        .iter()
        .map(|&e| (f.events().name(e).to_string(), f.events().label(e).to_string()))
        .collect();
    let member_label = f.events().label(x.iter().next().expect("non-empty candidate"));
    table.push((plan.merged_name.clone(), member_label.to_string()));
    let events = Events::from_owned(table)?;

    let m = merged + 1;
    let mut conflict = Relation::new(m);
    for &p in &kept {
        for &q in &kept {
            if f.in_conflict(p, q) {
                conflict.insert(forward[p], forward[q]);
            }
        }
    }
    for &p in &kept {
        if all_conflict(f, x, p) {
            conflict.insert(forward[p], merged);
            conflict.insert(merged, forward[p]);
        }
    }

    let mut flow = Relation::new(m);
    for &p in &kept {
        for &q in &kept {
            if f.flow().contains(p, q) {
                flow.insert(forward[p], forward[q]);
            }
        }
    }
    for &p in &kept {
        if x.iter().any(|e| f.flow().contains(p, e)) {
            flow.insert(forward[p], merged);
        }
        if x.iter().any(|e| f.flow().contains(e, p)) {
            flow.insert(merged, forward[p]);
        }
    }

    let folded = Fes::from_raw(events, flow, conflict);
    let map = FoldingMap {
        forward,
        merged,
        merged_name: plan.merged_name.clone(),
    };
    Ok((folded, map))
}

/// Consistent-predecessor lemma for a combinable set: a conflict-free set
/// lies in the merged predecessors exactly when it lies in one member's
/// predecessors, and the maximal consistent sets likewise transfer.
/// Returns the first counterexample subset, or `None` when it holds.
pub fn check_mcons_lemma(f: &Fes, x: EventSet) -> Option<EventSet> {
    let pre_x = f.pre_set(x);
    let consistent =
        |s: EventSet| s.iter().all(|a| f.conflict().row(a).intersect(s).is_empty());
    for y in pre_x.subsets() {
        if !consistent(y) {
            continue;
        }
        if !x.iter().any(|m| y.is_subset(f.pre(m))) {
            return Some(y);
        }
    }
    let merged_mcons = mcons(f, pre_x);
    for y in &merged_mcons {
        if !x.iter().any(|m| mcons(f, f.pre(m)).contains(y)) {
            return Some(*y);
        }
    }
    for m in x.iter() {
        for y in mcons(f, f.pre(m)) {
            if !merged_mcons.contains(&y) {
                return Some(y);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_event_has_empty_conflict_set() {
        let f = Fes::build_named(&[("a", "a"), ("b", "b")], &[], &[]).unwrap();
        assert!(conflict_set(&f, 0).is_empty());
    }

    #[test]
    fn condition_one_requires_conflict() {
        let f = Fes::build_named(&[("a", "a"), ("a2", "a")], &[], &[]).unwrap();
        let plan = is_combinable_fes(&f, EventSet::from_iter([0, 1]));
        assert!(!plan.combinable);
        assert!(plan.conditions[0].is_some());
    }

    #[test]
    fn conflicting_same_label_pair_is_combinable() {
        let f = Fes::build_named(&[("a", "a"), ("a2", "a")], &[], &[("a", "a2")]).unwrap();
        let plan = is_combinable_fes(&f, EventSet::from_iter([0, 1]));
        assert!(plan.combinable, "{}", plan.render(&f));
        let (folded, map) = fold_fes(&f, &plan, false).unwrap();
        assert_eq!(folded.events().len(), 1);
        assert_eq!(map.merged_name, "a+a2");
    }

    #[test]
    fn nested_predecessor_sets_trip_the_enabling_check() {
        // x1 fires after u alone, x2 needs u plus more; no conflicts tie
        // the extra predecessors to u, so merging would force them onto
        // x1's route. The five printed conditions all pass; only the
        // enabling-preservation check rejects the pair.
        let f = Fes::build_named(
            &[("x1", "x"), ("x2", "x"), ("u", "u"), ("v", "v"), ("w", "w")],
            &[("u", "x1"), ("u", "x2"), ("v", "x2"), ("w", "x2")],
            &[("x1", "x2")],
        )
        .unwrap();
        let plan = is_combinable_fes(&f, EventSet::from_iter([0, 1]));
        assert!(plan.conditions.iter().all(Option::is_none), "{}", plan.render(&f));
        assert!(plan.enabling_preservation.is_some());
        assert!(!plan.combinable);
    }
}
