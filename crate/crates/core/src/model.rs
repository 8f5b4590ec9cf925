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

//! Voting structures and the game container.
//!
//! A voting structure is a probability generating function over the number
//! of votes a player casts. Constructors cover all-or-nothing random voting,
//! a deterministic block, a parametric all-or-nothing vote, an arbitrary
//! pmf, and leader-led teams whose members independently follow the
//! leader's wish with probability `p`.

use std::collections::HashSet;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::rational::{in_unit_interval, parse_rational, ratio, to_fraction_string, Rational};

/// Upper bound on any single vote count; keeps dense products bounded.
pub const MAX_VOTES: u64 = 100_000;

/// A normalized voting structure: the coefficient of `x^j` is the
/// probability of casting exactly `j` votes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoteDistribution {
    pmf: RationalPoly,
}

impl VoteDistribution {
    /// Validates that every coefficient lies in `[0, 1]` and that they sum
    /// to exactly one.
    pub fn new(pmf: RationalPoly) -> Result<Self> {
        for (_, c) in pmf.terms() {
            if !in_unit_interval(c) {
                return Err(Error::ProbabilityOutOfRange(to_fraction_string(c)));
            }
        }
        let total = pmf.sum_coeffs();
        if !total.is_one() {
            return Err(Error::NotNormalized(to_fraction_string(&total)));
        }
        Ok(Self { pmf })
    }

    /// `1/2 + 1/2 x^w`.
    pub fn random(w: u64) -> Result<Self> {
        Self::bernoulli(w, ratio(1, 2))
    }

    /// `x^w`: all `w` votes, always.
    pub fn deterministic(w: u64) -> Result<Self> {
        Self::bernoulli(w, Rational::one())
    }

    /// `(1 - p) + p x^w`.
    pub fn bernoulli(w: u64, p: Rational) -> Result<Self> {
        let w = check_weight(w)?;
        check_prob(&p)?;
        let one_minus = Rational::one() - &p;
        Self::new(RationalPoly::from_terms([(0, one_minus), (w, p)]))
    }

    /// Arbitrary pmf given as `(votes, probability)` pairs.
    pub fn from_entries(entries: &[(u64, Rational)]) -> Result<Self> {
        let mut seen = HashSet::new();
        for (votes, prob) in entries {
            if *votes > MAX_VOTES {
                return Err(Error::Invalid(format!(
                    "vote count {votes} exceeds the supported maximum of {MAX_VOTES}"
                )));
            }
            if !seen.insert(*votes) {
                return Err(Error::DuplicateVotes(*votes as usize));
            }
            check_prob(prob)?;
        }
        Self::new(RationalPoly::from_terms(
            entries.iter().map(|(v, p)| (*v as usize, p.clone())),
        ))
    }

    /// Leader-led team. With probability `L` the leader wants the team in
    /// the coalition; each member independently follows the leader's wish
    /// with probability `p`:
    ///
    /// `L * prod((1-p) + p x^w_m) + (1-L) * prod(p + (1-p) x^w_m)`
    pub fn team(params: &TeamParams) -> Result<Self> {
        params.validate()?;
        let p = &params.p;
        let q = Rational::one() - p;
        let follow: Vec<RationalPoly> = params
            .member_weights
            .iter()
            .map(|&w| RationalPoly::from_terms([(0, q.clone()), (w as usize, p.clone())]))
            .collect();
        let defy: Vec<RationalPoly> = params
            .member_weights
            .iter()
            .map(|&w| RationalPoly::from_terms([(0, p.clone()), (w as usize, q.clone())]))
            .collect();
        Self::mix_wishes(
            &params.leader,
            RationalPoly::product(follow.iter()),
            RationalPoly::product(defy.iter()),
        )
    }

    /// Team of `n` single-vote members:
    /// `L ((1-p) + p x)^n + (1-L) (p + (1-p) x)^n`.
    pub fn uniform_team(n: u64, p: Rational, leader: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("a team needs at least one member".into()));
        }
        if n > MAX_VOTES {
            return Err(Error::Invalid(format!(
                "team size {n} exceeds the supported maximum of {MAX_VOTES}"
            )));
        }
        check_prob(&p)?;
        check_prob(&leader)?;
        let q = Rational::one() - &p;
        let n = n as u32;
        let join = RationalPoly::from_terms([(0, q.clone()), (1, p.clone())]).pow(n);
        let abstain = RationalPoly::from_terms([(0, p), (1, q)]).pow(n);
        Self::mix_wishes(&leader, join, abstain)
    }

    fn mix_wishes(leader: &Rational, join: RationalPoly, abstain: RationalPoly) -> Result<Self> {
        let other = Rational::one() - leader;
        Self::new(&join.scale(leader) + &abstain.scale(&other))
    }

    pub fn pmf(&self) -> &RationalPoly {
        &self.pmf
    }

    pub fn max_votes(&self) -> usize {
        self.pmf.degree().unwrap_or(0)
    }

    pub fn prob(&self, votes: usize) -> Rational {
        self.pmf.coeff(votes)
    }

    /// Support as `(votes, probability)` pairs in increasing vote order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.pmf.terms()
    }

    /// True when the player casts one fixed number of votes with certainty.
    pub fn is_deterministic(&self) -> bool {
        self.pmf.num_terms() == 1
    }
}

impl fmt::Display for VoteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pmf.fmt(f)
    }
}

fn check_weight(w: u64) -> Result<usize> {
    if w == 0 {
        return Err(Error::InvalidWeight(w));
    }
    if w > MAX_VOTES {
        return Err(Error::Invalid(format!(
            "vote count {w} exceeds the supported maximum of {MAX_VOTES}"
        )));
    }
    Ok(w as usize)
}

fn check_prob(p: &Rational) -> Result<()> {
    if in_unit_interval(p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(to_fraction_string(p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeamParams {
    pub member_weights: Vec<u64>,
    /// Probability that each member follows the leader's wish.
    pub p: Rational,
    /// Probability that the leader wants the team to join.
    pub leader: Rational,
}

impl TeamParams {
    pub fn new(member_weights: Vec<u64>, p: Rational, leader: Rational) -> Result<Self> {
        let params = Self {
            member_weights,
            p,
            leader,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if self.member_weights.is_empty() {
            return Err(Error::Invalid("a team needs at least one member".into()));
        }
        for &w in &self.member_weights {
            check_weight(w)?;
        }
        check_prob(&self.p)?;
        check_prob(&self.leader)
    }
}

/// The tunable parameters a structure may expose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamField {
    /// Join probability (bernoulli) or follow-the-leader probability (teams).
    P,
    /// The leader's desired join probability (teams only).
    L,
}

impl ParamField {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamField::P => "p",
            ParamField::L => "L",
        }
    }
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Declarative description of a voting structure, as it appears in game
/// documents. Sweeps substitute parameters here and rebuild the
/// distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureSpec {
    Random { votes: u64 },
    Deterministic { votes: u64 },
    Bernoulli { votes: u64, p: Rational },
    Pmf { entries: Vec<(u64, Rational)> },
    Team { weights: Vec<u64>, p: Rational, leader: Rational },
    UniformTeam { n: u64, p: Rational, leader: Rational },
}

impl StructureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureSpec::Random { .. } => "random",
            StructureSpec::Deterministic { .. } => "deterministic",
            StructureSpec::Bernoulli { .. } => "bernoulli",
            StructureSpec::Pmf { .. } => "pmf",
            StructureSpec::Team { .. } => "team",
            StructureSpec::UniformTeam { .. } => "uniform_team",
        }
    }

    pub fn build(&self) -> Result<VoteDistribution> {
        match self {
            StructureSpec::Random { votes } => {
                VoteDistribution::random(*votes).map_err(|e| e.at("votes"))
            }
            StructureSpec::Deterministic { votes } => {
                VoteDistribution::deterministic(*votes).map_err(|e| e.at("votes"))
            }
            StructureSpec::Bernoulli { votes, p } => {
                check_weight(*votes).map_err(|e| e.at("votes"))?;
                check_prob(p).map_err(|e| e.at("p"))?;
                VoteDistribution::bernoulli(*votes, p.clone())
            }
            StructureSpec::Pmf { entries } => {
                VoteDistribution::from_entries(entries).map_err(|e| e.at("entries"))
            }
            StructureSpec::Team { weights, p, leader } => {
                if weights.is_empty() {
                    return Err(Error::Invalid("a team needs at least one member".into())
                        .at("weights"));
                }
                for (i, &w) in weights.iter().enumerate() {
                    check_weight(w).map_err(|e| e.at(format!("weights[{i}]")))?;
                }
                check_prob(p).map_err(|e| e.at("p"))?;
                check_prob(leader).map_err(|e| e.at("L"))?;
                VoteDistribution::team(&TeamParams {
                    member_weights: weights.clone(),
                    p: p.clone(),
                    leader: leader.clone(),
                })
            }
            StructureSpec::UniformTeam { n, p, leader } => {
                check_prob(p).map_err(|e| e.at("p"))?;
                check_prob(leader).map_err(|e| e.at("L"))?;
                VoteDistribution::uniform_team(*n, p.clone(), leader.clone())
                    .map_err(|e| e.at("n"))
            }
        }
    }

    pub fn param(&self, field: ParamField) -> Option<&Rational> {
        match (self, field) {
            (StructureSpec::Bernoulli { p, .. }, ParamField::P)
            | (StructureSpec::Team { p, .. }, ParamField::P)
            | (StructureSpec::UniformTeam { p, .. }, ParamField::P) => Some(p),
            (StructureSpec::Team { leader, .. }, ParamField::L)
            | (StructureSpec::UniformTeam { leader, .. }, ParamField::L) => Some(leader),
            _ => None,
        }
    }

    /// Copy with one parameter replaced; `None` if this kind lacks `field`.
    pub fn with_param(&self, field: ParamField, value: Rational) -> Option<StructureSpec> {
        let mut spec = self.clone();
        match (&mut spec, field) {
            (StructureSpec::Bernoulli { p, .. }, ParamField::P)
            | (StructureSpec::Team { p, .. }, ParamField::P)
            | (StructureSpec::UniformTeam { p, .. }, ParamField::P) => *p = value,
            (StructureSpec::Team { leader, .. }, ParamField::L)
            | (StructureSpec::UniformTeam { leader, .. }, ParamField::L) => *leader = value,
            _ => return None,
        }
        Some(spec)
    }

    pub fn exposed_params(&self) -> Vec<ParamField> {
        [ParamField::P, ParamField::L]
            .into_iter()
            .filter(|f| self.param(*f).is_some())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    name: String,
    spec: StructureSpec,
    structure: VoteDistribution,
}

impl Player {
    pub fn new(name: impl Into<String>, spec: StructureSpec) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        let structure = spec.build()?;
        Ok(Self {
            name,
            spec,
            structure,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &StructureSpec {
        &self.spec
    }

    pub fn structure(&self) -> &VoteDistribution {
        &self.structure
    }
}

/// A weighted voting game `[q; G_1, ..., G_n]` with probabilistic structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    quota: usize,
    players: Vec<Player>,
}

impl Game {
    pub fn new(quota: u64, players: Vec<Player>) -> Result<Self> {
        if quota == 0 {
            return Err(Error::InvalidQuota);
        }
        if quota > MAX_VOTES * 64 {
            return Err(Error::Invalid(format!("quota {quota} is unreasonably large")));
        }
        if players.is_empty() {
            return Err(Error::NoPlayers);
        }
        let mut names = HashSet::new();
        for p in &players {
            if !names.insert(p.name.as_str()) {
                return Err(Error::DuplicatePlayer(p.name.clone()));
            }
        }
        Ok(Self {
            quota: quota as usize,
            players,
        })
    }

    /// Convenience: every player votes randomly with the given weight.
    /// Players are named `P1`, `P2`, ...
    pub fn random_voting(quota: u64, weights: &[u64]) -> Result<Self> {
        let players = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Player::new(format!("P{}", i + 1), StructureSpec::Random { votes: w }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(quota, players)
    }

    pub fn quota(&self) -> usize {
        self.quota
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.players.iter().map(|p| p.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPlayer(name.to_string()))
    }

    pub fn player(&self, name: &str) -> Result<&Player> {
        Ok(&self.players[self.index_of(name)?])
    }

    pub fn total_max_votes(&self) -> usize {
        self.players.iter().map(|p| p.structure.max_votes()).sum()
    }

    /// `q > (1/2) * sum of maximum votes`. Improper games are still valid.
    pub fn is_proper(&self) -> bool {
        2 * self.quota > self.total_max_votes()
    }

    /// Copy of the game with one player's structure replaced.
    pub fn with_spec(&self, index: usize, spec: StructureSpec) -> Result<Self> {
        let mut players = self.players.clone();
        let name = players[index].name.clone();
        players[index] = Player::new(name, spec)?;
        Ok(Self {
            quota: self.quota,
            players,
        })
    }

    /// Parses and validates a JSON game document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GameDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        doc.into_game()
    }

    pub fn to_document(&self) -> GameDocument {
        GameDocument {
            quota: self.quota as u64,
            players: self
                .players
                .iter()
                .map(|p| PlayerDocument {
                    name: p.name.clone(),
                    structure: serde_json::to_value(RawStructure::from(&p.spec))
                        .expect("structure serializes"),
                })
                .collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("game serializes")
    }
}

/// Loads a game from its JSON text.
pub fn load_game(text: &str) -> Result<Game> {
    Game::from_json(text)
}

/// Wire form of a game document. Structures are kept as raw JSON until
/// validation so errors can name the offending player.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub quota: u64,
    pub players: Vec<PlayerDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerDocument {
    pub name: String,
    pub structure: serde_json::Value,
}

impl GameDocument {
    pub fn into_game(self) -> Result<Game> {
        if self.quota == 0 {
            return Err(Error::InvalidQuota.at("quota"));
        }
        let mut seen = HashSet::new();
        let mut players = Vec::with_capacity(self.players.len());
        for (i, doc) in self.players.into_iter().enumerate() {
            let where_ = format!("players[{i}] ({:?})", doc.name);
            if doc.name.is_empty() {
                return Err(Error::EmptyName.at(format!("players[{i}].name")));
            }
            if !seen.insert(doc.name.clone()) {
                return Err(Error::DuplicatePlayer(doc.name.clone()).at(format!("{where_}.name")));
            }
            let raw: RawStructure = serde_json::from_value(doc.structure)
                .map_err(|e| Error::Schema(e.to_string()).at(format!("{where_}.structure")))?;
            let spec = raw
                .into_spec()
                .map_err(|e| e.at(format!("{where_}.structure")))?;
            let player = Player::new(doc.name, spec)
                .map_err(|e| e.at(format!("{where_}.structure")))?;
            players.push(player);
        }
        Game::new(self.quota, players)
    }
}

/// Serde mirror of [`StructureSpec`] with probabilities as strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawStructure {
    Random {
        votes: u64,
    },
    Deterministic {
        votes: u64,
    },
    Bernoulli {
        votes: u64,
        p: String,
    },
    Pmf {
        entries: Vec<(u64, String)>,
    },
    Team {
        weights: Vec<u64>,
        p: String,
        #[serde(rename = "L")]
        leader: String,
    },
    UniformTeam {
        n: u64,
        p: String,
        #[serde(rename = "L")]
        leader: String,
    },
}

fn parse_at(text: &str, path: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| e.at(path))
}

impl RawStructure {
    fn into_spec(self) -> Result<StructureSpec> {
        Ok(match self {
            RawStructure::Random { votes } => StructureSpec::Random { votes },
            RawStructure::Deterministic { votes } => StructureSpec::Deterministic { votes },
            RawStructure::Bernoulli { votes, p } => StructureSpec::Bernoulli {
                votes,
                p: parse_at(&p, "p")?,
            },
            RawStructure::Pmf { entries } => StructureSpec::Pmf {
                entries: entries
                    .into_iter()
                    .enumerate()
                    .map(|(i, (v, p))| Ok((v, parse_at(&p, &format!("entries[{i}]"))?)))
                    .collect::<Result<_>>()?,
            },
            RawStructure::Team { weights, p, leader } => StructureSpec::Team {
                weights,
                p: parse_at(&p, "p")?,
                leader: parse_at(&leader, "L")?,
            },
            RawStructure::UniformTeam { n, p, leader } => StructureSpec::UniformTeam {
                n,
                p: parse_at(&p, "p")?,
                leader: parse_at(&leader, "L")?,
            },
        })
    }
}

impl From<&StructureSpec> for RawStructure {
    fn from(spec: &StructureSpec) -> Self {
        let s = to_fraction_string;
        match spec {
            StructureSpec::Random { votes } => RawStructure::Random { votes: *votes },
            StructureSpec::Deterministic { votes } => {
                RawStructure::Deterministic { votes: *votes }
            }
            StructureSpec::Bernoulli { votes, p } => RawStructure::Bernoulli {
                votes: *votes,
                p: s(p),
            },
            StructureSpec::Pmf { entries } => RawStructure::Pmf {
                entries: entries.iter().map(|(v, p)| (*v, s(p))).collect(),
            },
            StructureSpec::Team { weights, p, leader } => RawStructure::Team {
                weights: weights.clone(),
                p: s(p),
                leader: s(leader),
            },
            StructureSpec::UniformTeam { n, p, leader } => RawStructure::UniformTeam {
                n: *n,
                p: s(p),
                leader: s(leader),
            },
        }
    }
}
