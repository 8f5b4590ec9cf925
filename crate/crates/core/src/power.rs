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

//! Classic Banzhaf power by coalition enumeration, and the generalized
//! index built from influence polynomials.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Game, VoteDistribution};
use crate::poly::RationalPoly;
use crate::rational::Rational;

/// Largest player count `classic_banzhaf` will enumerate (2^24 coalitions).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Below this many players the enumeration runs on the calling thread.
const PARALLEL_ENUMERATION_MIN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanzhafReport {
    /// Number of coalitions whose winning-ness flips when the player enters
    /// or leaves.
    pub marginal_counts: Vec<u64>,
    pub powers: Vec<Rational>,
}

impl BanzhafReport {
    pub fn total_count(&self) -> u64 {
        self.marginal_counts.iter().sum()
    }
}

/// Classic Banzhaf index of `[quota; weights]` by visiting all 2^n coalitions.
pub fn classic_banzhaf(quota: u64, weights: &[u64]) -> Result<BanzhafReport> {
    classic_banzhaf_with_cap(quota, weights, DEFAULT_ENUMERATION_CAP)
}

pub fn classic_banzhaf_with_cap(quota: u64, weights: &[u64], cap: usize) -> Result<BanzhafReport> {
    if quota == 0 {
        return Err(Error::InvalidQuota);
    }
    if weights.is_empty() {
        return Err(Error::NoPlayers);
    }
    if let Some(&w) = weights.iter().find(|&&w| w == 0) {
        return Err(Error::InvalidWeight(w));
    }
    let n = weights.len();
    if n > cap || n >= 64 {
        return Err(Error::Capacity { players: n, cap });
    }
    let quota = quota as u128;
    let weights: Vec<u128> = weights.iter().map(|&w| w as u128).collect();

    let tally = |mut counts: Vec<u64>, mask: u64| {
        let total: u128 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| weights[i])
            .sum();
        let wins = total >= quota;
        for (i, &w) in weights.iter().enumerate() {
            let flipped = if mask >> i & 1 == 1 {
                total - w
            } else {
                total + w
            };
            if (flipped >= quota) != wins {
                counts[i] += 1;
            }
        }
        counts
    };
    let coalitions = 0u64..1u64 << n;
    let counts = if n < PARALLEL_ENUMERATION_MIN {
        coalitions.fold(vec![0u64; n], tally)
    } else {
        coalitions
            .into_par_iter()
            .fold(|| vec![0u64; n], tally)
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };

    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Degenerate);
    }
    let powers = counts
        .iter()
        .map(|&c| Rational::new(c.into(), total.into()))
        .collect();
    Ok(BanzhafReport {
        marginal_counts: counts,
        powers,
    })
}

/// How the influence polynomial treats coalitions that a player could carry
/// past the quota alone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceMode {
    /// `v_Z` sums the whole support at or above `q - Z`, and the empty
    /// coalition (`Z = 0`) is included. Reduces to classic Banzhaf for every
    /// random-voting game.
    #[default]
    Extended,
    /// Literal form: only degrees `< q` count toward `v_Z`, and `Z` starts
    /// at 1.
    Strict,
}

/// `I(x) = sum_Z gamma_Z x^Z` where `v_Z` is the chance the player lifts a
/// `Z`-vote coalition to the quota and `gamma_Z = min(v_Z, 1 - v_Z)`.
pub fn influence_polynomial(dist: &VoteDistribution, quota: usize) -> RationalPoly {
    influence_polynomial_with(dist, quota, InfluenceMode::Extended)
}

pub fn influence_polynomial_with(
    dist: &VoteDistribution,
    quota: usize,
    mode: InfluenceMode,
) -> RationalPoly {
    if quota == 0 {
        return RationalPoly::zero();
    }
    let (mut v, first_z) = match mode {
        // Mass that already meets the quota on its own.
        InfluenceMode::Extended => (
            dist.support()
                .filter(|(j, _)| *j >= quota)
                .fold(Rational::zero(), |acc, (_, g)| acc + g),
            0,
        ),
        InfluenceMode::Strict => (Rational::zero(), 1),
    };
    let one = Rational::one();
    let mut terms = Vec::new();
    for z in 0..quota {
        if z > 0 {
            if let Some(g) = dist.pmf().coeff_ref(quota - z) {
                v += g;
            }
        }
        if z < first_z || v.is_zero() {
            continue;
        }
        // min(v, 1 - v) without forming 1 - v when v <= 1/2.
        let gamma = if v.numer() * 2u32 <= *v.denom() {
            v.clone()
        } else {
            &one - &v
        };
        if !gamma.is_zero() {
            terms.push((z, gamma));
        }
    }
    RationalPoly::from_terms(terms)
}

/// Distribution of the other players' total, truncated to the losing
/// totals `0..q-1`.
pub fn losing_tail(game: &Game, excluded: &str) -> Result<RationalPoly> {
    let skip = game.index_of(excluded)?;
    let cap = game.quota() - 1;
    Ok(game
        .players()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .fold(RationalPoly::one(), |acc, (_, p)| {
            acc.mul_truncated(p.structure().pmf(), cap)
        }))
}

/// Probability-weighted share of losing coalitions the player can swing.
pub fn influence(game: &Game, who: &str) -> Result<Rational> {
    influence_with(game, who, InfluenceMode::Extended)
}

pub fn influence_with(game: &Game, who: &str, mode: InfluenceMode) -> Result<Rational> {
    let idx = game.index_of(who)?;
    let tail = losing_tail(game, who)?;
    let ip = influence_polynomial_with(game.players()[idx].structure(), game.quota(), mode);
    Ok(ip.dot(&tail))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub names: Vec<String>,
    #[serde(skip)]
    pub influences: Vec<Rational>,
    #[serde(skip)]
    pub powers: Vec<Rational>,
    pub proper_game: bool,
}

impl PowerReport {
    pub fn total_influence(&self) -> Rational {
        self.influences
            .iter()
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn power_of(&self, name: &str) -> Option<&Rational> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.powers[i])
    }
}

/// Raw influences of every player, in player order.
pub fn influences(game: &Game, mode: InfluenceMode) -> Vec<Rational> {
    let players = game.players();
    let n = players.len();
    let cap = game.quota() - 1;
    // prefix[i] = G_0 ... G_{i-1} (i < n), suffix[i] = G_i ... G_{n-1}, both truncated.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(RationalPoly::one());
    for p in &players[..n - 1] {
        let next = prefix.last().unwrap().mul_truncated(p.structure().pmf(), cap);
        prefix.push(next);
    }
    let mut suffix = vec![RationalPoly::one(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].mul_truncated(players[i].structure().pmf(), cap);
    }
    let one = |i: usize| {
        let tail = prefix[i].mul_truncated(&suffix[i + 1], cap);
        influence_polynomial_with(players[i].structure(), game.quota(), mode).dot(&tail)
    };
    // Thread dispatch costs more than the whole computation on small games.
    if game.quota() * n < 512 {
        (0..n).map(one).collect()
    } else {
        (0..n).into_par_iter().map(one).collect()
    }
}

/// Generalized Banzhaf power: influences normalized to sum to one.
pub fn generalized_banzhaf(game: &Game) -> Result<PowerReport> {
    generalized_banzhaf_with(game, InfluenceMode::Extended)
}

pub fn generalized_banzhaf_with(game: &Game, mode: InfluenceMode) -> Result<PowerReport> {
    let influences = influences(game, mode);
    let total = influences
        .iter()
        .fold(Rational::zero(), |acc, x| acc + x);
    if total.is_zero() {
        return Err(Error::Degenerate);
    }
    let powers = influences.iter().map(|x| x / &total).collect();
    Ok(PowerReport {
        names: game.names(),
        influences,
        powers,
        proper_game: game.is_proper(),
    })
}
