//! Seeded random generation of valid prime event structures, the driver
//! behind the randomized property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::events::{Events, Relation};
use crate::pes::Pes;
use crate::semantics::guard_cap;

/// Parameters for one random structure. The same seed always produces the
/// same structure, on every platform.
#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub event_count: usize,
    pub label_count: usize,
    pub causality_density: f64,
    pub conflict_density: f64,
    pub seed: u64,
}

impl GenParams {
    fn check(&self, cap: usize) -> Result<()> {
        guard_cap(self.event_count, cap)?;
        for d in [self.causality_density, self.conflict_density] {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::Document(format!("density {d} outside [0,1]")));
            }
        }
        if self.label_count == 0 && self.event_count > 0 {
            return Err(Error::Document("label_count must be positive".into()));
        }
        Ok(())
    }
}

/// Generates a valid structure: a random order (edges only forward along
/// the index order, then closed), plus conflicts sampled over pairs that
/// are unordered and share no upper bound, closed hereditarily. Those two
/// restrictions are exactly what keeps conflict irreflexive under the
/// hereditary closure.
pub fn generate_random_pes(params: &GenParams, cap: usize) -> Result<Pes> {
    params.check(cap)?;
    let n = params.event_count;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let table: Vec<(String, String)> = (0..n)
        .map(|i| {
            let label = format!("l{}", rng.gen_range(0..params.label_count.max(1)));
            (format!("e{i}"), label)
        })
        .collect();
    let events = Events::from_owned(table)?;

    let mut causality: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(params.causality_density) {
                causality.push((i, j));
            }
        }
    }
    let mut le = Relation::from_pairs(n, &causality);
    le.reflexive_close();
    le.transitive_close();

    let comparable = |a: usize, b: usize| le.contains(a, b) || le.contains(b, a);
    let shares_upper_bound =
        |a: usize, b: usize| (0..n).any(|w| le.contains(a, w) && le.contains(b, w));

    let mut conflict = Relation::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if !comparable(i, j) && !shares_upper_bound(i, j) && rng.gen_bool(params.conflict_density)
            {
                conflict.insert(i, j);
                conflict.insert(j, i);
            }
        }
    }
    // Hereditary closure: a # b <= c forces a # c.
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in conflict.row(a).iter().collect::<Vec<_>>() {
                for c in le.row(b).iter() {
                    if c != b && !conflict.contains(a, c) {
                        conflict.insert(a, c);
                        conflict.insert(c, a);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    Pes::build(events, &causality, &conflict.pairs())
}
