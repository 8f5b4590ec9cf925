// Copyright 2026 The votepower Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Independent checks on the generating-function path: exhaustive
//! enumeration of joint vote outcomes, a direct influence computation that
//! never builds an influence polynomial, and a seeded Monte Carlo estimate.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Game, VoteDistribution};
use crate::poly::RationalPoly;
use crate::rational::{to_f64, Rational};

/// Maximum number of joint outcome tuples the enumerators will visit.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Trials per Monte Carlo chunk. Each chunk draws from its own stream, so
/// the estimate does not depend on how chunks are scheduled.
const CHUNK_TRIALS: u64 = 4096;

fn check_tuple_count<'a, I>(structures: I) -> Result<u128>
where
    I: IntoIterator<Item = &'a VoteDistribution>,
{
    let mut tuples: u128 = 1;
    for s in structures {
        tuples = tuples.saturating_mul(s.pmf().num_terms() as u128);
        if tuples > ENUMERATION_LIMIT {
            return Err(Error::SupportExplosion {
                tuples,
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(tuples)
}

/// Distribution of the total number of votes, found by walking every tuple
/// of individual outcomes and adding up tuple probabilities.
pub fn joint_distribution_enum(structures: &[&VoteDistribution]) -> Result<RationalPoly> {
    check_tuple_count(structures.iter().copied())?;
    let supports: Vec<Vec<(usize, &Rational)>> =
        structures.iter().map(|s| s.support().collect()).collect();
    let mut totals: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut cursor = vec![0usize; supports.len()];
    loop {
        let mut votes = 0;
        let mut prob = Rational::one();
        for (support, &i) in supports.iter().zip(&cursor) {
            let (v, p) = support[i];
            votes += v;
            prob *= p;
        }
        *totals.entry(votes).or_insert_with(Rational::zero) += prob;

        // Odometer increment.
        let mut k = 0;
        loop {
            if k == cursor.len() {
                return Ok(RationalPoly::from_terms(totals));
            }
            cursor[k] += 1;
            if cursor[k] < supports[k].len() {
                break;
            }
            cursor[k] = 0;
            k += 1;
        }
    }
}

/// Influence of `who` from first principles:
/// `sum over Z < q of P(others total Z) * min(v_Z, 1 - v_Z)` where `v_Z` is
/// the probability that `who` casts at least `q - Z` votes.
pub fn influence_first_principles(game: &Game, who: &str) -> Result<Rational> {
    let idx = game.index_of(who)?;
    let others: Vec<&VoteDistribution> = game
        .players()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, p)| p.structure())
        .collect();
    let joint = joint_distribution_enum(&others)?;
    let focal = game.players()[idx].structure();
    let q = game.quota();
    let one = Rational::one();
    let mut total = Rational::zero();
    for (z, prob_z) in joint.terms() {
        if z >= q {
            continue;
        }
        let mut v = Rational::zero();
        for (votes, g) in focal.support() {
            if z + votes >= q {
                v += g;
            }
        }
        let lose = &one - &v;
        let gamma = if v < lose { v } else { lose };
        total += prob_z * gamma;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean - exact| <= k * std_error`.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.std_error
    }
}

/// Cumulative-probability sampler for one structure.
struct Sampler {
    cdf: Vec<(f64, usize)>,
}

impl Sampler {
    fn new(dist: &VoteDistribution) -> Self {
        let mut acc = 0.0;
        let cdf = dist
            .support()
            .map(|(v, p)| {
                acc += to_f64(p);
                (acc, v)
            })
            .collect();
        Self { cdf }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf
            .iter()
            .find(|(c, _)| u < *c)
            .or(self.cdf.last())
            .map(|(_, v)| *v)
            .unwrap_or(0)
    }
}

/// Estimates the influence of `who` by sampling the other players' total
/// `Z` and averaging the exact `gamma_Z` (zero when `Z >= q`).
///
/// Uses ChaCha8 seeded with `seed`; trials are split into fixed-size chunks,
/// chunk `c` drawing from stream `c`, so results are bit-identical for any
/// thread count.
pub fn monte_carlo_influence(game: &Game, who: &str, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::Invalid("Monte Carlo needs at least one trial".into()));
    }
    let idx = game.index_of(who)?;
    let q = game.quota();
    let focal = game.players()[idx].structure();
    let one = Rational::one();
    let gamma: Vec<f64> = (0..q)
        .map(|z| {
            let v = focal
                .support()
                .filter(|(votes, _)| z + votes >= q)
                .fold(Rational::zero(), |acc, (_, g)| acc + g);
            let lose = &one - &v;
            to_f64(if v < lose { &v } else { &lose })
        })
        .collect();
    let samplers: Vec<Sampler> = game
        .players()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, p)| Sampler::new(p.structure()))
        .collect();

    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..n {
                let z: usize = samplers.iter().map(|s| s.draw(&mut rng)).sum();
                let g = gamma.get(z).copied().unwrap_or(0.0);
                sum += g;
                sum_sq += g * g;
            }
            (sum, sum_sq)
        })
        .collect();
    // Sequential reduction keeps the floating-point sum order fixed.
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = trials as f64;
    let mean = sum / n;
    let std_error = if trials > 1 {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        std_error,
        trials,
        seed,
    })
}
