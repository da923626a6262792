//! Label- and relation-preserving isomorphism between structures of the
//! same kind, plus a canonical encoding used to deduplicate structures up
//! to isomorphism.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::events::{EventSet, Relation};
use crate::structure::EventStructure;

/// Mapping from events of the left structure to events of the right one,
/// indexed by left event index.
pub type Bijection = Vec<usize>;

/// Finds a label-preserving bijection that preserves and reflects both of
/// the variant's relations, if one exists. Candidates are explored in
/// ascending index order, so the witness is deterministic.
pub fn isomorphic(x: &EventStructure, y: &EventStructure) -> Result<Option<Bijection>> {
    if x.kind() != y.kind() {
        return Err(Error::KindMismatch {
            expected: x.kind().to_string(),
            got: y.kind().to_string(),
        });
    }
    let n = x.events().len();
    if n != y.events().len() {
        return Ok(None);
    }
    let mut x_labels: Vec<&str> = (0..n).map(|i| x.events().label(i)).collect();
    let mut y_labels: Vec<&str> = (0..n).map(|i| y.events().label(i)).collect();
    x_labels.sort();
    y_labels.sort();
    if x_labels != y_labels {
        return Ok(None);
    }

    let xr = x.relations();
    let yr = y.relations();
    let sig = |s: &EventStructure, rels: &[&Relation; 2], e: usize| {
        (
            s.events().label(e).to_string(),
            rels[0].row(e).len(),
            rels[0].column(e).len(),
            rels[1].row(e).len(),
            rels[1].column(e).len(),
        )
    };
    let xsig: Vec<_> = (0..n).map(|e| sig(x, &xr, e)).collect();
    let ysig: Vec<_> = (0..n).map(|e| sig(y, &yr, e)).collect();

    struct Search<'a> {
        n: usize,
        xr: [&'a Relation; 2],
        yr: [&'a Relation; 2],
        xsig: Vec<(String, usize, usize, usize, usize)>,
        ysig: Vec<(String, usize, usize, usize, usize)>,
    }

    impl Search<'_> {
        fn go(&self, i: usize, map: &mut Vec<usize>, used: &mut EventSet) -> bool {
            if i == self.n {
                return true;
            }
            for cand in 0..self.n {
                if used.contains(cand) || self.xsig[i] != self.ysig[cand] {
                    continue;
                }
                let consistent = (0..i).all(|j| {
                    (0..2).all(|r| {
                        self.xr[r].contains(i, j) == self.yr[r].contains(cand, map[j])
                            && self.xr[r].contains(j, i) == self.yr[r].contains(map[j], cand)
                    })
                }) && (0..2)
                    .all(|r| self.xr[r].contains(i, i) == self.yr[r].contains(cand, cand));
                if !consistent {
                    continue;
                }
                map[i] = cand;
                used.insert(cand);
                if self.go(i + 1, map, used) {
                    return true;
                }
                used.remove(cand);
                map[i] = usize::MAX;
            }
            false
        }
    }

    let search = Search { n, xr, yr, xsig, ysig };
    let mut map = vec![usize::MAX; n];
    let mut used = EventSet::EMPTY;
    if search.go(0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// A byte encoding equal for two structures exactly when they are
/// isomorphic: the minimum relabelled adjacency encoding over a
/// refinement-guided search of orderings.
pub fn canonical_key(s: &EventStructure) -> Vec<u8> {
    let n = s.events().len();
    let rels = s.relations();

    // Initial colors by label rank.
    let mut labels: Vec<&str> = (0..n).map(|i| s.events().label(i)).collect();
    labels.sort();
    labels.dedup();
    let mut colors: Vec<usize> = (0..n)
        .map(|i| labels.binary_search(&s.events().label(i)).unwrap())
        .collect();

    refine(&mut colors, &rels, n);

    let mut best: Option<Vec<u8>> = None;
    individualize(&mut colors.clone(), &rels, s, n, &mut best);
    best.unwrap_or_default()
}

fn refine(colors: &mut [usize], rels: &[&Relation; 2], n: usize) {
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for e in 0..n {
            let mut s = Vec::new();
            for r in rels {
                let mut outs: Vec<usize> = r.row(e).iter().map(|j| colors[j]).collect();
                let mut ins: Vec<usize> = r.column(e).iter().map(|j| colors[j]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                s.push(outs.len());
                s.extend(outs);
                s.push(usize::MAX);
                s.extend(ins);
                s.push(usize::MAX);
            }
            sigs.push((colors[e], s));
        }
        let mut ranks: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut sorted: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        for (rank, sig) in sorted.into_iter().enumerate() {
            ranks.insert(sig, rank);
        }
        let next: Vec<usize> = (0..n).map(|e| ranks[&sigs[e]]).collect();
        if next == colors {
            return;
        }
        colors.copy_from_slice(&next);
    }
}

fn individualize(
    colors: &mut [usize],
    rels: &[&Relation; 2],
    s: &EventStructure,
    n: usize,
    best: &mut Option<Vec<u8>>,
) {
    // Discrete coloring: encode and keep the minimum.
    let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, &color) in colors.iter().enumerate() {
        by_color.entry(color).or_default().push(e);
    }
    if by_color.values().all(|v| v.len() == 1) {
        let mut perm = vec![0usize; n]; // perm[new] = old
        for (slot, (_, v)) in by_color.iter().enumerate() {
            perm[slot] = v[0];
        }
        let enc = encode(s, rels, &perm, n);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    }
    let cell = by_color.values().find(|v| v.len() > 1).unwrap().clone();
    for &e in &cell {
        let mut next = colors.to_vec();
        // Move `e` strictly before the rest of its cell.
        for c in next.iter_mut() {
            *c = *c * 2 + 1;
        }
        next[e] -= 1;
        refine(&mut next, rels, n);
        individualize(&mut next, rels, s, n, best);
    }
}

fn encode(s: &EventStructure, rels: &[&Relation; 2], perm: &[usize], n: usize) -> Vec<u8> {
    let mut out = Vec::new();
    out.push(match s.kind() {
        crate::structure::Kind::Pes => b'p',
        crate::structure::Kind::Aes => b'a',
        crate::structure::Kind::Fes => b'f',
    });
    out.push(n as u8);
    for &old in perm {
        let l = s.events().label(old).as_bytes();
        out.push(l.len() as u8);
        out.extend_from_slice(l);
    }
    for r in rels {
        for &a in perm {
            for &b in perm {
                out.push(u8::from(r.contains(a, b)));
            }
        }
    }
    out
}

/// Short stable fingerprint of the canonical key (FNV-1a over the bytes).
pub fn canonical_hash(s: &EventStructure) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in canonical_key(s) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
