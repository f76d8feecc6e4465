//! Seeded random playouts.
//!
//! Samples are split into shards of `SHARD_SIZE`. Shard `s` draws from
//! ChaCha8 seeded with `seed` on stream `s`, so each shard's output depends
//! only on `(seed, s)` and the merged counts do not depend on thread count or
//! scheduling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::{classify_final_shadow, RoomState};

pub const SHARD_SIZE: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloResult {
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    /// Final centred sumtroid counts.
    pub sumtroid_counts: BTreeMap<i64, u64>,
    /// Final shadow counts keyed by `k` of `F(n,k)`; finals of another shape
    /// are not counted here.
    pub shadow_counts: BTreeMap<u32, u64>,
}

impl MonteCarloResult {
    pub fn frequencies(&self) -> BTreeMap<i64, BigRational> {
        self.sumtroid_counts
            .iter()
            .map(|(&k, &c)| {
                (
                    k,
                    BigRational::new(BigInt::from(c), BigInt::from(self.samples)),
                )
            })
            .collect()
    }

    pub fn shadow_frequency(&self, k: u32) -> f64 {
        self.shadow_counts.get(&k).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    /// Standard error of a frequency whose true value is `p`.
    pub fn standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Playouts from the flat clusteron of size `n`.
pub fn monte_carlo(n: u32, samples: u64, seed: u64) -> Result<MonteCarloResult> {
    monte_carlo_from(&RoomState::flat(n as usize), samples, seed)
}

pub fn monte_carlo_from(initial: &RoomState, samples: u64, seed: u64) -> Result<MonteCarloResult> {
    if samples == 0 {
        return Err(Error::Domain(
            "monte_carlo needs at least one sample".into(),
        ));
    }
    let shards = samples.div_ceil(SHARD_SIZE);
    let k0 = initial.sumtroid();
    let parts: Vec<(BTreeMap<i64, u64>, BTreeMap<u32, u64>)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let count = SHARD_SIZE.min(samples - shard * SHARD_SIZE);
            let mut ks = BTreeMap::new();
            let mut shadows = BTreeMap::new();
            let mut board = Board::new(initial);
            for _ in 0..count {
                board.reset(initial);
                board.play(&mut rng);
                let fin = board.to_state();
                *ks.entry(fin.sumtroid() - k0).or_insert(0) += 1;
                if let Some(id) = classify_final_shadow(&fin.shadow()) {
                    *shadows.entry(id.k).or_insert(0) += 1;
                }
            }
            (ks, shadows)
        })
        .collect();

    let mut sumtroid_counts = BTreeMap::new();
    let mut shadow_counts = BTreeMap::new();
    for (ks, shadows) in parts {
        for (k, c) in ks {
            *sumtroid_counts.entry(k).or_insert(0) += c;
        }
        for (k, c) in shadows {
            *shadow_counts.entry(k).or_insert(0) += c;
        }
    }
    Ok(MonteCarloResult {
        n: initial.total(),
        samples,
        seed,
        sumtroid_counts,
        shadow_counts,
    })
}

/// A padded occupancy array that grows when a move would reach its edge.
struct Board {
    origin: i64,
    occ: Vec<u32>,
    pairs: Vec<usize>,
}

impl Board {
    fn new(s: &RoomState) -> Self {
        let mut b = Board {
            origin: 0,
            occ: Vec::new(),
            pairs: Vec::new(),
        };
        b.reset(s);
        b
    }

    fn reset(&mut self, s: &RoomState) {
        let pad = s.total() as usize + 2;
        let width = s.occupancy().len() + 2 * pad;
        if self.occ.len() < width {
            self.occ = vec![0; width];
        } else {
            self.occ.iter_mut().for_each(|c| *c = 0);
        }
        let start = (self.occ.len() - s.occupancy().len()) / 2;
        self.origin = s.offset() - start as i64;
        self.occ[start..start + s.occupancy().len()].copy_from_slice(s.occupancy());
    }

    fn grow(&mut self) {
        let extra = self.occ.len();
        let mut occ = vec![0; self.occ.len() + 2 * extra];
        occ[extra..extra + self.occ.len()].copy_from_slice(&self.occ);
        self.occ = occ;
        self.origin -= extra as i64;
    }

    fn play(&mut self, rng: &mut ChaCha8Rng) {
        loop {
            // a target room is at most one past the outermost occupant
            if self.occ[0] > 0 || self.occ[self.occ.len() - 1] > 0 {
                self.grow();
            }
            self.pairs.clear();
            for j in 0..self.occ.len() - 1 {
                if self.occ[j] > 0 && self.occ[j + 1] > 0 {
                    self.pairs.push(j);
                }
            }
            if self.pairs.is_empty() {
                return;
            }
            let i = self.pairs[rng.random_range(0..self.pairs.len())];
            let mut l = i - 1;
            while self.occ[l] > 0 {
                l -= 1;
            }
            let mut r = i + 2;
            while self.occ[r] > 0 {
                r += 1;
            }
            self.occ[i] -= 1;
            self.occ[i + 1] -= 1;
            self.occ[l] += 1;
            self.occ[r] += 1;
        }
    }

    fn to_state(&self) -> RoomState {
        RoomState::new(self.origin, self.occ.clone()).expect("violinists are conserved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sample_is_a_point_mass() {
        let r = monte_carlo(5, 1, 42).unwrap();
        assert_eq!(r.sumtroid_counts.len(), 1);
        let (&k, _) = r.sumtroid_counts.iter().next().unwrap();
        assert!(k.abs() <= 6 && k != 0);
    }

    #[test]
    fn reruns_are_identical() {
        let a = monte_carlo(5, 40_000, 7).unwrap();
        assert_eq!(a, monte_carlo(5, 40_000, 7).unwrap());
        assert_ne!(
            a.sumtroid_counts,
            monte_carlo(5, 40_000, 8).unwrap().sumtroid_counts
        );
    }

    #[test]
    fn flat_four_within_three_sigma() {
        let r = monte_carlo(4, 60_000, 1).unwrap();
        for (k, p) in [
            (-3, 1.0 / 6.0),
            (-1, 1.0 / 6.0),
            (0, 2.0 / 6.0),
            (1, 1.0 / 6.0),
            (3, 1.0 / 6.0),
        ] {
            let f = r.sumtroid_counts.get(&k).copied().unwrap_or(0) as f64 / r.samples as f64;
            assert!(
                (f - p).abs() <= 3.0 * r.standard_error(p),
                "K={k}: {f} vs {p}"
            );
        }
        assert_eq!(r.sumtroid_counts.values().sum::<u64>(), 60_000);
    }

    #[test]
    fn boards_grow_for_lopsided_states() {
        let r = monte_carlo_from(&"[5][4]".parse().unwrap(), 50, 3).unwrap();
        assert_eq!(r.sumtroid_counts.values().sum::<u64>(), 50);
    }
}
