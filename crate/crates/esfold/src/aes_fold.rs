//! Merging a set of same-label events of an AES into one event, with the
//! gate conditions that guarantee behaviour preservation.

use crate::aes::Aes;
use crate::error::{Error, Result};
use crate::events::{EventSet, Events, Relation};
use crate::semantics::aes_sem::{histories, is_consistent, is_direct_arrow};
use crate::structure::EventStructure;

/// Total map from the original events onto the folded ones: identity off
/// the merged set, constant on it.
#[derive(Debug, Clone)]
pub struct FoldingMap {
    /// Original index to folded index.
    pub forward: Vec<usize>,
    /// Folded index of the merged event.
    pub merged: usize,
    pub merged_name: String,
}

impl FoldingMap {
    pub fn apply(&self, e: usize) -> usize {
        self.forward[e]
    }

    pub fn apply_set(&self, set: EventSet) -> EventSet {
        EventSet::from_iter(set.iter().map(|e| self.forward[e]))
    }
}

/// Events strictly below every member of `x`.
pub fn strict_causes(a: &Aes, x: EventSet) -> EventSet {
    let n = a.events().len();
    EventSet::from_iter((0..n).filter(|&e| x.iter().all(|m| a.lt(e, m))))
}

/// Events that may precede some member of `x` without being excluded by
/// all of them: arrows into one member while some other member has no
/// arrow back, minus the strict causes and `x` itself.
pub fn weak_predecessors(a: &Aes, x: EventSet) -> EventSet {
    let n = a.events().len();
    let s = strict_causes(a, x);
    EventSet::from_iter((0..n).filter(|&w| {
        !x.contains(w)
            && !s.contains(w)
            && x.iter().any(|e| a.arrow(w, e))
            && x.iter().any(|e2| !a.arrow(e2, w))
    }))
}

/// Per-condition outcome of the similarity check, with the first failing
/// witness tuple for each condition.
#[derive(Debug, Clone, Default)]
pub struct SimilarReport {
    /// Some((e, e')) when two members miss equal labels or the mutual
    /// conflict.
    pub label_or_conflict: Option<(String, String)>,
    /// Some((e, e', w)) when `e -> w` holds but neither `e' -> w` nor
    /// `w -> e`.
    pub unmatched_arrow: Option<(String, String, String)>,
    /// Some((w, e, e')) when `w` is a direct predecessor of `e` but has no
    /// arrow into `e'`.
    pub unmatched_direct_pred: Option<(String, String, String)>,
}

impl SimilarReport {
    pub fn holds(&self) -> bool {
        self.label_or_conflict.is_none()
            && self.unmatched_arrow.is_none()
            && self.unmatched_direct_pred.is_none()
    }
}

/// Checks that the members of `x` look like occurrences of one activity:
/// same label and pairwise conflict, arrows out of a member matched by the
/// others or turned back, and direct predecessors shared by all members.
pub fn is_similar(a: &Aes, x: EventSet) -> SimilarReport {
    let name = |i: usize| a.events().name(i).to_string();
    let mut rep = SimilarReport::default();
    let outside = a.events().all().minus(x);

    'c1: for e in x.iter() {
        for e2 in x.iter() {
            if e == e2 {
                continue;
            }
            if a.events().label(e) != a.events().label(e2)
                || !(a.arrow(e, e2) && a.arrow(e2, e))
            {
                rep.label_or_conflict = Some((name(e), name(e2)));
                break 'c1;
            }
        }
    }
    'c2: for e in x.iter() {
        for e2 in x.iter() {
            if e == e2 {
                continue;
            }
            for w in outside.iter() {
                if a.arrow(e, w) && !a.arrow(e2, w) && !a.arrow(w, e) {
                    rep.unmatched_arrow = Some((name(e), name(e2), name(w)));
                    break 'c2;
                }
            }
        }
    }
    'c3: for e in x.iter() {
        for w in outside.iter() {
            if is_direct_arrow(a, w, e) {
                for e2 in x.iter() {
                    if e2 != e && !a.arrow(w, e2) {
                        rep.unmatched_direct_pred = Some((name(w), name(e), name(e2)));
                        break 'c3;
                    }
                }
            }
        }
    }
    rep
}

/// How a candidate history has to relate to the common causes plus the
/// causal closure of a consistent weak-predecessor subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HistoryMatch {
    /// History (minus its owner) contained in the target set.
    #[default]
    Within,
    /// History (minus its owner) equal to the target set.
    Exact,
}

/// Outcome for one consistent subset of the weak predecessors.
#[derive(Debug, Clone)]
pub struct SubsetCheck {
    pub subset: EventSet,
    /// Witnessing member and history, when found.
    pub witness: Option<(usize, EventSet)>,
}

/// Full diagnostics for one fold candidate.
#[derive(Debug, Clone)]
pub struct AesFoldingPlan {
    pub candidate: EventSet,
    pub strict_causes: EventSet,
    pub weak_predecessors: EventSet,
    pub similar: SimilarReport,
    pub subset_checks: Vec<SubsetCheck>,
    pub combinable: bool,
    pub merged_name: String,
    pub mode: HistoryMatch,
}

impl AesFoldingPlan {
    pub fn render(&self, a: &Aes) -> String {
        let mut s = String::new();
        let members = a.events().set_names(self.candidate).join(",");
        s.push_str(&format!(
            "candidate {{{members}}}: {}\n",
            if self.combinable { "combinable" } else { "not combinable" }
        ));
        s.push_str(&format!(
            "  common causes: {{{}}}  weak predecessors: {{{}}}\n",
            a.events().set_names(self.strict_causes).join(","),
            a.events().set_names(self.weak_predecessors).join(",")
        ));
        if let Some((e, e2)) = &self.similar.label_or_conflict {
            s.push_str(&format!("  label/conflict fails at ({e},{e2})\n"));
        }
        if let Some((e, e2, w)) = &self.similar.unmatched_arrow {
            s.push_str(&format!(
                "  arrow matching fails: {e} -> {w} with neither {e2} -> {w} nor {w} -> {e}\n"
            ));
        }
        if let Some((w, e, e2)) = &self.similar.unmatched_direct_pred {
            s.push_str(&format!(
                "  direct predecessor fails: {w} -> {e} direct but no {w} -> {e2}\n"
            ));
        }
        for chk in &self.subset_checks {
            let y = a.events().set_names(chk.subset).join(",");
            match &chk.witness {
                Some((e, h)) => s.push_str(&format!(
                    "  subset {{{y}}}: witnessed by {} with history {{{}}}\n",
                    a.events().name(*e),
                    a.events().set_names(*h).join(",")
                )),
                None => s.push_str(&format!("  subset {{{y}}}: no witness\n")),
            }
        }
        s
    }
}

fn merged_name_for(a: &Aes, x: EventSet) -> String {
    let mut parts = a.events().set_names(x);
    parts.sort();
    let mut name = parts.join("+");
    while a.events().index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Evaluates the full gate for folding `x`: similarity plus, for every
/// consistent subset of the weak predecessors, a member that is not
/// excluded by the subset and owns a history matching the common causes
/// extended with the subset's causal closure.
pub fn is_combinable_aes(
    a: &Aes,
    x: EventSet,
    mode: HistoryMatch,
    cap: usize,
) -> Result<AesFoldingPlan> {
    let strict = strict_causes(a, x);
    let weak = weak_predecessors(a, x);
    let similar = is_similar(a, x);

    let member_histories: Vec<(usize, Vec<EventSet>)> = x
        .iter()
        .map(|e| Ok((e, histories(a, e, cap)?)))
        .collect::<Result<_>>()?;

    let mut subset_checks = Vec::new();
    let mut all_witnessed = true;
    for y in weak.subsets() {
        if !is_consistent(a, y) {
            continue;
        }
        let target = strict.union(a.down_closure(y));
        let mut witness = None;
        'member: for (e, hs) in &member_histories {
            if y.iter().any(|w| a.arrow(*e, w)) {
                continue;
            }
            for h in hs {
                let hminus = h.without(*e);
                let ok = match mode {
                    HistoryMatch::Within => hminus.is_subset(target),
                    HistoryMatch::Exact => hminus == target,
                };
                if ok {
                    witness = Some((*e, *h));
                    break 'member;
                }
            }
        }
        if witness.is_none() {
            all_witnessed = false;
        }
        subset_checks.push(SubsetCheck { subset: y, witness });
    }

    let combinable = x.len() >= 2 && similar.holds() && all_witnessed;
    Ok(AesFoldingPlan {
        candidate: x,
        strict_causes: strict,
        weak_predecessors: weak,
        similar,
        subset_checks,
        combinable,
        merged_name: merged_name_for(a, x),
        mode,
    })
}

/// Replaces the candidate set by a single event. Causality keeps the
/// common causes below the merged event and puts it below everything that
/// was above some member; an arrow touches the merged event only when it
/// touched every member the same way. Label taken from the members.
///
/// The gate is enforced unless `force` is set; forced folds may produce
/// structures that fail validation or lose behaviour.
pub fn fold_aes(a: &Aes, plan: &AesFoldingPlan, force: bool) -> Result<(Aes, FoldingMap)> {
    if !plan.combinable && !force {
        return Err(Error::NotCombinable);
    }
    let x = plan.candidate;
    let n = a.events().len();

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
        .map(|&e| (a.events().name(e).to_string(), a.events().label(e).to_string()))
        .collect();
    let member_label = a.events().label(x.iter().next().expect("non-empty candidate"));
    table.push((plan.merged_name.clone(), member_label.to_string()));
    let events = Events::from_owned(table)?;

    let m = merged + 1;
    let mut le = Relation::new(m);
    for i in 0..m {
        le.insert(i, i);
    }
    for &p in &kept {
        for &q in &kept {
            if a.lt(p, q) {
                le.insert(forward[p], forward[q]);
            }
        }
    }
    for s in plan.strict_causes.iter() {
        le.insert(forward[s], merged);
    }
    for &q in &kept {
        if x.iter().any(|e| a.lt(e, q)) {
            le.insert(merged, forward[q]);
        }
    }

    let mut aconf = Relation::new(m);
    for &p in &kept {
        for &q in &kept {
            if a.arrow(p, q) {
                aconf.insert(forward[p], forward[q]);
            }
        }
    }
    for &p in &kept {
        if x.iter().all(|e| a.arrow(p, e)) {
            aconf.insert(forward[p], merged);
        }
        if x.iter().all(|e| a.arrow(e, p)) {
            aconf.insert(merged, forward[p]);
        }
    }

    let folded = Aes::from_raw(events, le, aconf);
    let map = FoldingMap {
        forward,
        merged,
        merged_name: plan.merged_name.clone(),
    };
    Ok((folded, map))
}

/// Convenience wrapper: plan and fold in one step.
pub fn fold_aes_on(
    a: &Aes,
    x: EventSet,
    mode: HistoryMatch,
    force: bool,
    cap: usize,
) -> Result<(Aes, FoldingMap, AesFoldingPlan)> {
    let plan = is_combinable_aes(a, x, mode, cap)?;
    let (folded, map) = fold_aes(a, &plan, force)?;
    Ok((folded, map, plan))
}

/// The folded image of a configuration, for the preservation checks.
pub fn image_structure(folded: &Aes) -> EventStructure {
    EventStructure::Aes(folded.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_CAP;

    fn two_conflicting() -> Aes {
        Aes::build_named(
            &[("a", "a"), ("a2", "a")],
            &[],
            &[("a", "a2"), ("a2", "a")],
        )
        .unwrap()
    }

    #[test]
    fn strict_causes_of_singleton_is_its_past() {
        let a = Aes::build_named(
            &[("x", "x"), ("y", "y")],
            &[("x", "y")],
            &[],
        )
        .unwrap();
        assert_eq!(strict_causes(&a, EventSet::singleton(1)), EventSet::singleton(0));
    }

    #[test]
    fn pure_conflict_pair_folds_to_one_free_event() {
        let a = two_conflicting();
        let x = EventSet::from_iter([0, 1]);
        let plan = is_combinable_aes(&a, x, HistoryMatch::Within, DEFAULT_CAP).unwrap();
        assert!(plan.combinable);
        assert_eq!(plan.strict_causes, EventSet::EMPTY);
        assert_eq!(plan.weak_predecessors, EventSet::EMPTY);
        let (folded, map) = fold_aes(&a, &plan, false).unwrap();
        assert_eq!(folded.events().len(), 1);
        assert_eq!(folded.aconflict().pair_count(), 0);
        assert_eq!(map.apply(0), map.apply(1));
        assert!(folded.validate().is_valid());
    }

    #[test]
    fn unmatched_arrow_blocks_similarity() {
        // a -> w with no matching arrow from a2 and no arrow back.
        let a = Aes::build_named(
            &[("a", "a"), ("a2", "a"), ("w", "b")],
            &[],
            &[("a", "a2"), ("a2", "a"), ("a", "w")],
        )
        .unwrap();
        let rep = is_similar(&a, EventSet::from_iter([0, 1]));
        assert_eq!(
            rep.unmatched_arrow,
            Some(("a".into(), "a2".into(), "w".into()))
        );
    }

    #[test]
    fn unmatched_direct_predecessor_blocks_similarity() {
        // w -> a direct, but no w -> a2.
        let a = Aes::build_named(
            &[("a", "a"), ("a2", "a"), ("w", "b")],
            &[],
            &[("a", "a2"), ("a2", "a"), ("w", "a")],
        )
        .unwrap();
        let rep = is_similar(&a, EventSet::from_iter([0, 1]));
        assert_eq!(
            rep.unmatched_direct_pred,
            Some(("w".into(), "a".into(), "a2".into()))
        );
        assert!(rep.unmatched_arrow.is_none());
    }

    #[test]
    fn gate_failure_needs_force() {
        let a = Aes::build_named(
            &[("a", "a"), ("a2", "a"), ("w", "b")],
            &[],
            &[("a", "a2"), ("a2", "a"), ("w", "a")],
        )
        .unwrap();
        let x = EventSet::from_iter([0, 1]);
        let plan = is_combinable_aes(&a, x, HistoryMatch::Within, DEFAULT_CAP).unwrap();
        assert!(!plan.combinable);
        assert!(matches!(fold_aes(&a, &plan, false), Err(Error::NotCombinable)));
        assert!(fold_aes(&a, &plan, true).is_ok());
    }
}
