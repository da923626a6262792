//! History preserving bisimilarity between two finite structures of any
//! variant mix.
//!
//! The decision procedure computes the largest bisimulation as a greatest
//! fixed point: start from every triple of two configurations related by a
//! label- and order-isomorphism, then repeatedly delete triples that
//! cannot match some single-event step on either side. Steps follow each
//! variant's extension order; for structures with asymmetric conflict this
//! is stricter than set inclusion (a step may not disable past events),
//! while for the other variants it is plain inclusion. Admitting plain
//! inclusion steps for the asymmetric variant as well would be a coarser
//! reading; this module deliberately uses the extension order, which is
//! the one under which folding preserves the equivalence. The two
//! structures are equivalent exactly when the empty triple survives.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::Result;
use crate::events::EventSet;
use crate::par::batch_test;
use crate::semantics::configurations;
use crate::structure::EventStructure;

/// A label-preserving, order-preserving and order-reflecting bijection
/// between the events of two configurations, sorted by left event index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PomsetIso {
    pub pairs: Vec<(u8, u8)>,
}

impl PomsetIso {
    fn extended(&self, e1: usize, e2: usize) -> PomsetIso {
        let mut pairs = self.pairs.clone();
        let pos = pairs.partition_point(|p| (p.0 as usize) < e1);
        pairs.insert(pos, (e1 as u8, e2 as u8));
        PomsetIso { pairs }
    }

    pub fn image_of(&self, e1: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|p| p.0 as usize == e1)
            .map(|p| p.1 as usize)
    }

    /// The inverse mapping, for the symmetric witness.
    pub fn inverted(&self) -> PomsetIso {
        let mut pairs: Vec<(u8, u8)> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        PomsetIso { pairs }
    }
}

/// All pomset isomorphisms between configuration `c1` of `x` and `c2` of
/// `y`, in a deterministic order. Empty when the label multisets differ
/// or no bijection respects both local orders.
pub fn pomset_isos(
    x: &EventStructure,
    c1: EventSet,
    y: &EventStructure,
    c2: EventSet,
) -> Vec<PomsetIso> {
    if c1.len() != c2.len() {
        return Vec::new();
    }
    struct Search<'a> {
        left: Vec<usize>,
        right: Vec<usize>,
        x: &'a EventStructure,
        y: &'a EventStructure,
        o1: crate::events::Relation,
        o2: crate::events::Relation,
    }

    impl Search<'_> {
        fn go(&self, k: usize, map: &mut Vec<usize>, used: &mut EventSet, out: &mut Vec<PomsetIso>) {
            if k == self.left.len() {
                let pairs = self
                    .left
                    .iter()
                    .zip(map.iter())
                    .map(|(&a, &b)| (a as u8, b as u8))
                    .collect();
                out.push(PomsetIso { pairs });
                return;
            }
            let a = self.left[k];
            for &b in &self.right {
                if used.contains(b) || self.x.events().label(a) != self.y.events().label(b) {
                    continue;
                }
                let ok = (0..k).all(|j| {
                    let (a2, b2) = (self.left[j], map[j]);
                    self.o1.contains(a, a2) == self.o2.contains(b, b2)
                        && self.o1.contains(a2, a) == self.o2.contains(b2, b)
                });
                if !ok {
                    continue;
                }
                map.push(b);
                used.insert(b);
                self.go(k + 1, map, used, out);
                used.remove(b);
                map.pop();
            }
        }
    }

    let search = Search {
        left: c1.iter().collect(),
        right: c2.iter().collect(),
        x,
        y,
        o1: x.local_order(c1),
        o2: y.local_order(c2),
    };
    let mut out = Vec::new();
    search.go(0, &mut Vec::new(), &mut EventSet::default(), &mut out);
    out
}

/// Which side of the pair a certificate's configuration lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A step one structure can take that the other can never answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub side: Side,
    /// Event names of the unanswerable configuration.
    pub configuration: Vec<String>,
    pub label: String,
}

/// Outcome of the check: the surviving triples and, when the structures
/// are distinguished, a certificate.
#[derive(Debug, Clone)]
pub struct HpWitness {
    pub equivalent: bool,
    /// Surviving triples `(C1, iso, C2)`, sorted deterministically.
    pub triples: Vec<(EventSet, PomsetIso, EventSet)>,
    pub certificate: Option<Certificate>,
}

impl HpWitness {
    pub fn render(&self, x: &EventStructure, y: &EventStructure) -> String {
        let mut s = String::new();
        if self.equivalent {
            let _ = writeln!(s, "hp-equivalent ({} surviving triples)", self.triples.len());
            if self.triples.len() <= 64 {
                for (c1, iso, c2) in &self.triples {
                    let m: Vec<String> = iso
                        .pairs
                        .iter()
                        .map(|&(a, b)| {
                            format!(
                                "{}->{}",
                                x.events().name(a as usize),
                                y.events().name(b as usize)
                            )
                        })
                        .collect();
                    let _ = writeln!(
                        s,
                        "  ({{{}}}, [{}], {{{}}})",
                        x.set_names(*c1).join(","),
                        m.join(","),
                        y.set_names(*c2).join(",")
                    );
                }
            }
        } else {
            let _ = writeln!(s, "not hp-equivalent");
            if let Some(cert) = &self.certificate {
                let side = match cert.side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                let _ = writeln!(
                    s,
                    "  {} structure reaches {{{}}} via label `{}` with no counterpart",
                    side,
                    cert.configuration.join(","),
                    cert.label
                );
            }
        }
        s
    }
}

/// Lookup key of a triple: both configuration masks plus the mapping.
type TripleKey = (u64, u64, Vec<(u8, u8)>);

struct Arena {
    c1: Vec<EventSet>,
    c2: Vec<EventSet>,
    isos: Vec<PomsetIso>,
    by_key: HashMap<TripleKey, usize>,
}

/// Decides history preserving bisimilarity between `x` and `y`.
pub fn hp_bisimilar(x: &EventStructure, y: &EventStructure, cap: usize) -> Result<HpWitness> {
    let fam1 = configurations(x, cap)?;
    let fam2 = configurations(y, cap)?;

    let mut arena = Arena {
        c1: Vec::new(),
        c2: Vec::new(),
        isos: Vec::new(),
        by_key: HashMap::new(),
    };

    fn sorted_label_multiset(s: &EventStructure, c: EventSet) -> Vec<&str> {
        let mut v: Vec<&str> = c.iter().map(|e| s.events().label(e)).collect();
        v.sort();
        v
    }
    let l2: Vec<Vec<&str>> = fam2.iter().map(|c| sorted_label_multiset(y, c)).collect();

    for c1 in fam1.iter() {
        let lm1 = sorted_label_multiset(x, c1);
        for (j, c2) in fam2.iter().enumerate() {
            if c1.len() != c2.len() || lm1 != l2[j] {
                continue;
            }
            for iso in pomset_isos(x, c1, y, c2) {
                let key = (c1.0, c2.0, iso.pairs.clone());
                arena.by_key.insert(key, arena.isos.len());
                arena.c1.push(c1);
                arena.c2.push(c2);
                arena.isos.push(iso);
            }
        }
    }

    let count = arena.isos.len();
    let root = arena.by_key[&(0u64, 0u64, Vec::new())];
    let mut alive = vec![true; count];

    let survives = |t: usize, alive: &[bool]| -> bool {
        let (c1, c2, iso) = (arena.c1[t], arena.c2[t], &arena.isos[t]);
        let forward = x.extension_events(c1).iter().all(|e1| {
            y.extension_events(c2).iter().any(|e2| {
                x.events().label(e1) == y.events().label(e2) && {
                    let f = iso.extended(e1, e2);
                    arena
                        .by_key
                        .get(&(c1.with(e1).0, c2.with(e2).0, f.pairs))
                        .is_some_and(|&id| alive[id])
                }
            })
        });
        forward
            && y.extension_events(c2).iter().all(|e2| {
                x.extension_events(c1).iter().any(|e1| {
                    x.events().label(e1) == y.events().label(e2) && {
                        let f = iso.extended(e1, e2);
                        arena
                            .by_key
                            .get(&(c1.with(e1).0, c2.with(e2).0, f.pairs))
                            .is_some_and(|&id| alive[id])
                    }
                })
            })
    };

    loop {
        let next = batch_test(count, |t| alive[t] && survives(t, &alive));
        if next == alive {
            break;
        }
        alive = next;
    }

    let equivalent = alive[root];
    let certificate = if equivalent {
        None
    } else {
        Some(trace_certificate(x, y, &arena, &alive, root))
    };

    let mut triples: Vec<(EventSet, PomsetIso, EventSet)> = (0..count)
        .filter(|&t| alive[t])
        .map(|t| (arena.c1[t], arena.isos[t].clone(), arena.c2[t]))
        .collect();
    triples.sort_by(|a, b| {
        (a.0.len(), a.0 .0, a.2 .0, &a.1.pairs).cmp(&(b.0.len(), b.0 .0, b.2 .0, &b.1.pairs))
    });

    Ok(HpWitness { equivalent, triples, certificate })
}

/// Follows failing requirements down from a dead triple until a step with
/// no candidate counterpart at all is found; that step is the certificate.
fn trace_certificate(
    x: &EventStructure,
    y: &EventStructure,
    arena: &Arena,
    alive: &[bool],
    start: usize,
) -> Certificate {
    let mut t = start;
    loop {
        let (c1, c2, iso) = (arena.c1[t], arena.c2[t], &arena.isos[t]);
        let mut descend: Option<usize> = None;
        let mut found: Option<Certificate> = None;

        let mut requirements: Vec<(Side, usize)> = x
            .extension_events(c1)
            .iter()
            .map(|e| (Side::Left, e))
            .collect();
        requirements.extend(y.extension_events(c2).iter().map(|e| (Side::Right, e)));

        'reqs: for (side, e) in requirements {
            let mut candidates: Vec<usize> = Vec::new();
            let answers: Vec<usize> = match side {
                Side::Left => y.extension_events(c2).iter().collect(),
                Side::Right => x.extension_events(c1).iter().collect(),
            };
            for a in answers {
                let (e1, e2) = match side {
                    Side::Left => (e, a),
                    Side::Right => (a, e),
                };
                if x.events().label(e1) != y.events().label(e2) {
                    continue;
                }
                let f = iso.extended(e1, e2);
                if let Some(&id) = arena.by_key.get(&(c1.with(e1).0, c2.with(e2).0, f.pairs)) {
                    if alive[id] {
                        continue 'reqs; // requirement satisfied
                    }
                    candidates.push(id);
                }
            }
            if candidates.is_empty() {
                let (s, conf, label) = match side {
                    Side::Left => (x, c1.with(e), x.events().label(e)),
                    Side::Right => (y, c2.with(e), y.events().label(e)),
                };
                found = Some(Certificate {
                    side,
                    configuration: s.set_names(conf),
                    label: label.to_string(),
                });
            } else {
                descend = Some(candidates[0]);
            }
            break;
        }

        if let Some(cert) = found {
            return cert;
        }
        match descend {
            Some(next) => t = next,
            // A dead triple always has a failing requirement against the
            // final surviving set.
            None => unreachable!("dead triple with no failing requirement"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::Pes;
    use crate::semantics::DEFAULT_CAP;

    #[test]
    fn empty_configurations_have_one_iso() {
        let p: EventStructure = Pes::build_named(&[("a", "a")], &[], &[]).unwrap().into();
        let isos = pomset_isos(&p, EventSet::EMPTY, &p, EventSet::EMPTY);
        assert_eq!(isos.len(), 1);
        assert!(isos[0].pairs.is_empty());
    }

    #[test]
    fn chain_and_antichain_are_not_pomset_isomorphic() {
        let chain: EventStructure =
            Pes::build_named(&[("a", "a"), ("b", "b")], &[("a", "b")], &[])
                .unwrap()
                .into();
        let anti: EventStructure = Pes::build_named(&[("a", "a"), ("b", "b")], &[], &[])
            .unwrap()
            .into();
        let c = EventSet::from_iter([0, 1]);
        assert!(pomset_isos(&chain, c, &anti, c).is_empty());
    }

    #[test]
    fn structure_is_equivalent_to_itself() {
        let p: EventStructure = Pes::build_named(
            &[("a", "a"), ("b", "b"), ("c", "c")],
            &[("a", "b")],
            &[("b", "c")],
        )
        .unwrap()
        .into();
        let w = hp_bisimilar(&p, &p, DEFAULT_CAP).unwrap();
        assert!(w.equivalent);
    }

    #[test]
    fn label_difference_is_distinguished_with_certificate() {
        let x: EventStructure = Pes::build_named(&[("a", "a")], &[], &[]).unwrap().into();
        let y: EventStructure = Pes::build_named(&[("b", "b")], &[], &[]).unwrap().into();
        let w = hp_bisimilar(&x, &y, DEFAULT_CAP).unwrap();
        assert!(!w.equivalent);
        let cert = w.certificate.unwrap();
        assert_eq!(cert.configuration.len(), 1);
    }
}
