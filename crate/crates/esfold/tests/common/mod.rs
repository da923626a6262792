//! Shared helpers for the integration suites: fixture loading, name-based
//! set assertions, and an independent brute-force configuration oracle
//! that re-checks the defining clauses subset by subset.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use esfold::events::EventSet;
use esfold::structure::EventStructure;
use esfold::{doc, GenParams};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> EventStructure {
    let text = std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("reading fixture {name}: {e}"));
    doc::parse(&text).unwrap_or_else(|e| panic!("parsing fixture {name}: {e}"))
}

/// Event set by names, panicking on unknown ones.
pub fn set(s: &EventStructure, names: &[&str]) -> EventSet {
    s.events().resolve(names).unwrap()
}

pub fn names(s: &EventStructure, set: EventSet) -> BTreeSet<String> {
    s.events().set_names(set).into_iter().collect()
}

pub fn name_family<I: IntoIterator<Item = EventSet>>(
    s: &EventStructure,
    sets: I,
) -> BTreeSet<BTreeSet<String>> {
    sets.into_iter().map(|c| names(s, c)).collect()
}

pub fn family_of(names_list: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
    names_list
        .iter()
        .map(|ns| ns.iter().map(|n| n.to_string()).collect())
        .collect()
}

/// Independent oracle: filters every subset of the event set through a
/// direct reading of the variant's configuration clauses, without going
/// through the library's step-based enumerator.
pub fn brute_force_configs(s: &EventStructure) -> Vec<EventSet> {
    let n = s.events().len();
    let mut out = Vec::new();
    for mask in 0..(1u64 << n) {
        let c = EventSet(mask);
        if oracle_is_config(s, c) {
            out.push(c);
        }
    }
    out
}

fn acyclic(edges: &[(usize, usize)], members: &[usize]) -> bool {
    // DFS cycle detection over the induced subgraph.
    let mut state = vec![0u8; 64]; // 0 unseen, 1 on stack, 2 done
    fn visit(v: usize, edges: &[(usize, usize)], members: &[usize], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &(a, b) in edges {
            if a == v && members.contains(&b) {
                if state[b] == 1 {
                    return false;
                }
                if state[b] == 0 && !visit(b, edges, members, state) {
                    return false;
                }
            }
        }
        state[v] = 2;
        true
    }
    for &v in members {
        if state[v] == 0 && !visit(v, edges, members, &mut state) {
            return false;
        }
    }
    true
}

fn oracle_is_config(s: &EventStructure, c: EventSet) -> bool {
    let members: Vec<usize> = c.iter().collect();
    match s {
        EventStructure::Pes(p) => {
            let closed = members.iter().all(|&e| {
                (0..p.events().len()).all(|w| !p.le(w, e) || c.contains(w))
            });
            let conflict_free = members
                .iter()
                .all(|&a| members.iter().all(|&b| !p.in_conflict(a, b)));
            closed && conflict_free
        }
        EventStructure::Aes(a) => {
            let closed = members.iter().all(|&e| {
                (0..a.events().len()).all(|w| !a.le(w, e) || c.contains(w))
            });
            let edges: Vec<(usize, usize)> = members
                .iter()
                .flat_map(|&x| {
                    members
                        .iter()
                        .filter(move |&&y| a.arrow(x, y))
                        .map(move |&y| (x, y))
                })
                .collect();
            closed && acyclic(&edges, &members)
        }
        EventStructure::Fes(f) => {
            let conflict_free = members
                .iter()
                .all(|&a| members.iter().all(|&b| !f.in_conflict(a, b)));
            if !conflict_free {
                return false;
            }
            let edges: Vec<(usize, usize)> = members
                .iter()
                .flat_map(|&x| {
                    members
                        .iter()
                        .filter(move |&&y| f.flow().contains(x, y))
                        .map(move |&y| (x, y))
                })
                .collect();
            if !acyclic(&edges, &members) {
                return false;
            }
            members.iter().all(|&e| {
                f.pre(e).iter().all(|w| {
                    c.contains(w)
                        || members
                            .iter()
                            .any(|&v| f.in_conflict(w, v) && f.flow().contains(v, e))
                })
            })
        }
    }
}

/// Deterministic batch of random prime structures for the property runs,
/// cycling through a few density profiles for variety.
pub fn random_pes_batch(count: usize, events: usize, seed_base: u64) -> Vec<esfold::Pes> {
    const PROFILES: [(f64, f64); 4] = [(0.3, 0.35), (0.15, 0.6), (0.4, 0.5), (0.1, 0.8)];
    (0..count)
        .map(|i| {
            let (causality_density, conflict_density) = PROFILES[i % PROFILES.len()];
            let params = GenParams {
                event_count: events,
                label_count: 3,
                causality_density,
                conflict_density,
                seed: seed_base + i as u64,
            };
            esfold::generate_random_pes(&params, esfold::DEFAULT_CAP).unwrap()
        })
        .collect()
}
