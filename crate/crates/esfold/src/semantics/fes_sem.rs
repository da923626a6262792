//! Semantic conflict, direct conflict and maximal consistent predecessor
//! sets for flow event structures.

use crate::error::Result;
use crate::events::{EventSet, Relation};
use crate::fes::Fes;
use crate::semantics::configurations;
use crate::structure::EventStructure;
use crate::validate::{ValidationReport, Violation};

/// Maximal conflict-free subsets of `zs`, in ascending mask order.
pub fn mcons(f: &Fes, zs: EventSet) -> Vec<EventSet> {
    let consistent = |s: EventSet| {
        s.iter()
            .all(|a| f.conflict().row(a).intersect(s).is_empty())
    };
    zs.subsets()
        .filter(|&s| consistent(s))
        .filter(|&s| {
            // Maximal: every element left out conflicts something inside.
            zs.minus(s)
                .iter()
                .all(|w| !f.conflict().row(w).intersect(s).is_empty())
        })
        .collect()
}

/// Conflict neighbourhood of one event.
pub fn conflict_set(f: &Fes, e: usize) -> EventSet {
    f.conflict().row(e)
}

/// Pairs that no configuration contains jointly. Reflexive pairs mark
/// events that occur in no configuration at all.
pub fn semantic_conflict(f: &Fes, cap: usize) -> Result<Relation> {
    let s = EventStructure::Fes(f.clone());
    let fam = configurations(&s, cap)?;
    let n = f.events().len();
    let mut co = Relation::new(n);
    for c in fam.iter() {
        for a in c.iter() {
            for b in c.iter() {
                co.insert(a, b);
            }
        }
    }
    let mut sem = Relation::new(n);
    for a in 0..n {
        for b in 0..n {
            if !co.contains(a, b) {
                sem.insert(a, b);
            }
        }
    }
    Ok(sem)
}

/// Direct conflict: `e # e2` holds and some maximal consistent set of
/// `e`'s flow predecessors avoids the conflicts of `e2`, so `e` can be
/// enabled without disabling `e2`. Not symmetric in general.
pub fn direct_conflict(f: &Fes, e: usize, e2: usize) -> bool {
    f.in_conflict(e, e2)
        && mcons(f, f.pre(e))
            .iter()
            .any(|y| y.intersect(conflict_set(f, e2)).is_empty())
}

/// Joint-executability checks: syntactic conflict must coincide with
/// semantic conflict on distinct pairs, and no event may be dead.
pub fn semantic_report(f: &Fes, cap: usize) -> Result<ValidationReport> {
    let sem = semantic_conflict(f, cap)?;
    let n = f.events().len();
    let mut rep = ValidationReport::default();
    for e in 0..n {
        if sem.contains(e, e) {
            rep.push(Violation::DeadEvent {
                event: f.events().name(e).to_string(),
            });
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if sem.contains(a, b) && !f.in_conflict(a, b) {
                rep.push(Violation::NotFaithful {
                    a: f.events().name(a).to_string(),
                    b: f.events().name(b).to_string(),
                });
            }
        }
    }
    Ok(rep)
}
