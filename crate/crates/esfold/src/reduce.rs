//! Iterated folding: enumerate candidate sets, fold to a fixed point, and
//! explore every fold order to surface the irreducible forms. The order
//! of folds can matter, so greedy strategies document their tie-breaking
//! and an exhaustive mode walks all of them.

use std::collections::HashSet;

use crate::aes_fold::{fold_aes, is_combinable_aes, AesFoldingPlan, HistoryMatch};
use crate::error::{Error, Result};
use crate::events::EventSet;
use crate::fes_fold::{fold_fes, is_combinable_fes, FesFoldingPlan};
use crate::hpbisim::hp_bisimilar;
use crate::iso::{canonical_hash, canonical_key, isomorphic};
use crate::par::batch_map;
use crate::structure::EventStructure;

/// A fold candidate with its full gate diagnostics.
#[derive(Debug, Clone)]
pub enum CandidatePlan {
    Aes(Box<AesFoldingPlan>),
    Fes(Box<FesFoldingPlan>),
}

impl CandidatePlan {
    pub fn candidate(&self) -> EventSet {
        match self {
            CandidatePlan::Aes(p) => p.candidate,
            CandidatePlan::Fes(p) => p.candidate,
        }
    }

    pub fn combinable(&self) -> bool {
        match self {
            CandidatePlan::Aes(p) => p.combinable,
            CandidatePlan::Fes(p) => p.combinable,
        }
    }

    pub fn merged_name(&self) -> &str {
        match self {
            CandidatePlan::Aes(p) => &p.merged_name,
            CandidatePlan::Fes(p) => &p.merged_name,
        }
    }

    pub fn render(&self, s: &EventStructure) -> String {
        match (self, s) {
            (CandidatePlan::Aes(p), EventStructure::Aes(a)) => p.render(a),
            (CandidatePlan::Fes(p), EventStructure::Fes(f)) => p.render(f),
            _ => String::from("plan/structure kind mismatch\n"),
        }
    }
}

/// All same-label candidate sets of size `2..=k` with their plans, ordered
/// by label, then size, then lexicographic member indices. `k` defaults to
/// the largest equal-label class.
pub fn enumerate_candidates(
    s: &EventStructure,
    k: Option<usize>,
    mode: HistoryMatch,
    cap: usize,
) -> Result<Vec<CandidatePlan>> {
    let events = s.events();
    let mut labels: Vec<&str> = events.indices().map(|i| events.label(i)).collect();
    labels.sort();
    labels.dedup();

    let mut sets: Vec<EventSet> = Vec::new();
    for label in labels {
        let mut class: Vec<usize> = events
            .indices()
            .filter(|&i| events.label(i) == label)
            .collect();
        class.sort_by_key(|&i| events.name(i).to_string());
        let kmax = k.unwrap_or(class.len()).min(class.len());
        for size in 2..=kmax {
            collect_combinations(&class, size, &mut sets);
        }
    }

    match s {
        EventStructure::Aes(a) => batch_map(&sets, |&x| {
            Ok(CandidatePlan::Aes(Box::new(is_combinable_aes(a, x, mode, cap)?)))
        })
        .into_iter()
        .collect(),
        EventStructure::Fes(f) => Ok(batch_map(&sets, |&x| {
            CandidatePlan::Fes(Box::new(is_combinable_fes(f, x)))
        })),
        EventStructure::Pes(_) => Err(Error::KindMismatch {
            expected: "aes or fes".into(),
            got: "pes".into(),
        }),
    }
}

fn collect_combinations(class: &[usize], size: usize, out: &mut Vec<EventSet>) {
    fn go(class: &[usize], size: usize, start: usize, cur: EventSet, out: &mut Vec<EventSet>) {
        if cur.len() == size {
            out.push(cur);
            return;
        }
        for i in start..class.len() {
            go(class, size, i + 1, cur.with(class[i]), out);
        }
    }
    go(class, size, 0, EventSet::EMPTY, out);
}

fn apply_fold(s: &EventStructure, plan: &CandidatePlan) -> Result<EventStructure> {
    match (s, plan) {
        (EventStructure::Aes(a), CandidatePlan::Aes(p)) => {
            Ok(EventStructure::Aes(fold_aes(a, p, false)?.0))
        }
        (EventStructure::Fes(f), CandidatePlan::Fes(p)) => {
            Ok(EventStructure::Fes(fold_fes(f, p, false)?.0))
        }
        _ => Err(Error::KindMismatch {
            expected: "matching plan".into(),
            got: "mixed".into(),
        }),
    }
}

/// One applied fold in a trace.
#[derive(Debug, Clone)]
pub struct TraceStep {
    /// Member names of the folded set.
    pub folded: Vec<String>,
    pub merged_name: String,
    pub events_after: usize,
    /// Canonical fingerprint of the structure after the step.
    pub structure_hash: String,
}

/// A fold sequence from an initial structure to an irreducible one.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub initial_hash: String,
    pub steps: Vec<TraceStep>,
    pub result: EventStructure,
}

impl ReductionTrace {
    pub fn render(&self) -> String {
        let mut out = format!("initial {}\n", self.initial_hash);
        for (i, st) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: fold {{{}}} -> {} ({} events, {})\n",
                i + 1,
                st.folded.join(","),
                st.merged_name,
                st.events_after,
                st.structure_hash
            ));
        }
        out.push_str(&format!(
            "result: {} events, {}\n",
            self.result.events().len(),
            canonical_hash(&self.result)
        ));
        out
    }
}

/// Greedy candidate selection per round, or full exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// First combinable candidate in enumeration order.
    #[default]
    First,
    /// The fold whose result has the fewest relation pairs; ties fall back
    /// to enumeration order.
    SmallestResult,
    /// Explore all fold orders and return a trace to the smallest
    /// irreducible form (fewest events, then smallest canonical key).
    Exhaustive,
}

/// Applies folds until no candidate passes the gate. The final structure
/// is checked to be behaviourally equivalent to the input.
pub fn minimize(
    s: &EventStructure,
    strategy: Strategy,
    mode: HistoryMatch,
    cap: usize,
) -> Result<ReductionTrace> {
    if strategy == Strategy::Exhaustive {
        let forms = all_minimal_forms(s, 10_000, mode, cap)?;
        let best = forms
            .classes
            .into_iter()
            .min_by_key(|c| (c.structure.events().len(), canonical_key(&c.structure)))
            .expect("at least one minimal form");
        return Ok(best.trace);
    }

    let mut trace = ReductionTrace {
        initial_hash: canonical_hash(s),
        steps: Vec::new(),
        result: s.clone(),
    };
    loop {
        let accepted: Vec<CandidatePlan> = enumerate_candidates(&trace.result, None, mode, cap)?
            .into_iter()
            .filter(CandidatePlan::combinable)
            .collect();
        if accepted.is_empty() {
            break;
        }
        let plan = match strategy {
            Strategy::First => &accepted[0],
            Strategy::SmallestResult => {
                let sizes = accepted
                    .iter()
                    .map(|p| {
                        let folded = apply_fold(&trace.result, p)?;
                        let [r1, r2] = folded.relations();
                        Ok(r1.pair_count() + r2.pair_count())
                    })
                    .collect::<Result<Vec<usize>>>()?;
                let best = sizes
                    .iter()
                    .enumerate()
                    .min_by_key(|(i, &sz)| (sz, *i))
                    .map(|(i, _)| i)
                    .expect("non-empty");
                &accepted[best]
            }
            Strategy::Exhaustive => unreachable!(),
        };
        let folded = apply_fold(&trace.result, plan)?;
        trace.steps.push(TraceStep {
            folded: trace.result.events().set_names(plan.candidate()),
            merged_name: plan.merged_name().to_string(),
            events_after: folded.events().len(),
            structure_hash: canonical_hash(&folded),
        });
        trace.result = folded;
    }

    let witness = hp_bisimilar(s, &trace.result, cap)?;
    if !witness.equivalent {
        return Err(Error::Invalid(
            "minimization produced a non-equivalent structure".into(),
        ));
    }
    Ok(trace)
}

/// One irreducible structure reachable by folding, with a witnessing
/// trace.
#[derive(Debug, Clone)]
pub struct MinimalClass {
    pub structure: EventStructure,
    pub trace: ReductionTrace,
}

/// Every irreducible form reachable from `s`, deduplicated up to
/// isomorphism. `complete` is false when the search budget ran out.
#[derive(Debug, Clone)]
pub struct MinimalForms {
    pub classes: Vec<MinimalClass>,
    pub complete: bool,
}

/// Exhaustive walk over all fold sequences (depth-first in deterministic
/// candidate order). Visited structures are pruned by canonical key
/// before any isomorphism test runs; the final classes are double-checked
/// pairwise and each class is verified behaviourally equivalent to the
/// input.
pub fn all_minimal_forms(
    s: &EventStructure,
    budget: usize,
    mode: HistoryMatch,
    cap: usize,
) -> Result<MinimalForms> {
    let initial_hash = canonical_hash(s);
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    visited.insert(canonical_key(s));

    let mut frontier: Vec<(EventStructure, Vec<TraceStep>)> = vec![(s.clone(), Vec::new())];
    let mut classes: Vec<MinimalClass> = Vec::new();
    let mut class_keys: HashSet<Vec<u8>> = HashSet::new();
    let mut explored = 0usize;
    let mut complete = true;

    while let Some((cur, steps)) = frontier.pop() {
        explored += 1;
        if explored > budget {
            complete = false;
            break;
        }
        let accepted: Vec<CandidatePlan> = enumerate_candidates(&cur, None, mode, cap)?
            .into_iter()
            .filter(CandidatePlan::combinable)
            .collect();
        if accepted.is_empty() {
            if class_keys.insert(canonical_key(&cur)) {
                classes.push(MinimalClass {
                    structure: cur.clone(),
                    trace: ReductionTrace {
                        initial_hash: initial_hash.clone(),
                        steps: steps.clone(),
                        result: cur,
                    },
                });
            }
            continue;
        }
        for plan in accepted.iter().rev() {
            let folded = apply_fold(&cur, plan)?;
            if visited.insert(canonical_key(&folded)) {
                let mut next_steps = steps.clone();
                next_steps.push(TraceStep {
                    folded: cur.events().set_names(plan.candidate()),
                    merged_name: plan.merged_name().to_string(),
                    events_after: folded.events().len(),
                    structure_hash: canonical_hash(&folded),
                });
                frontier.push((folded, next_steps));
            }
        }
    }

    classes.sort_by_key(|c| (c.structure.events().len(), canonical_key(&c.structure)));

    // Canonical keys already separate the classes; the direct isomorphism
    // check guards the key construction.
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            if isomorphic(&classes[i].structure, &classes[j].structure)?.is_some() {
                return Err(Error::Invalid(
                    "canonical keys failed to separate isomorphic forms".into(),
                ));
            }
        }
    }
    for class in &classes {
        let w = hp_bisimilar(s, &class.structure, cap)?;
        if !w.equivalent {
            return Err(Error::Invalid(
                "reachable irreducible form is not behaviourally equivalent".into(),
            ));
        }
    }

    Ok(MinimalForms { classes, complete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::Pes;
    use crate::semantics::DEFAULT_CAP;

    #[test]
    fn distinct_labels_give_no_candidates() {
        let a = Pes::build_named(&[("a", "a"), ("b", "b")], &[], &[("a", "b")])
            .unwrap()
            .to_aes()
            .unwrap();
        let s = EventStructure::Aes(a);
        let cands =
            enumerate_candidates(&s, None, HistoryMatch::Within, DEFAULT_CAP).unwrap();
        assert!(cands.is_empty());
    }

    #[test]
    fn already_minimal_structure_has_empty_trace_and_one_class() {
        let a = Pes::build_named(&[("a", "a"), ("b", "b")], &[("a", "b")], &[])
            .unwrap()
            .to_aes()
            .unwrap();
        let s = EventStructure::Aes(a);
        let trace = minimize(&s, Strategy::First, HistoryMatch::Within, DEFAULT_CAP).unwrap();
        assert!(trace.steps.is_empty());
        let forms = all_minimal_forms(&s, 100, HistoryMatch::Within, DEFAULT_CAP).unwrap();
        assert!(forms.complete);
        assert_eq!(forms.classes.len(), 1);
    }
}
