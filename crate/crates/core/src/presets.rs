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

//! Bundled example games.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{Game, Player, StructureSpec};
use crate::rational::{int, ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `[6; 4, 3, 2, 1]`, everyone votes randomly.
    FourPlayerRandom,
    /// `[6; 4, 3, 2, 1]` where A casts 0/2/3/4 votes with probabilities
    /// 1/10, 4/10, 3/10, 2/10.
    FourPlayerPmf,
    /// `[6; 4, 3, 2, 1]` with one player voting `(1 - p) + p x^w`.
    FourPlayerParametric(crate::sweep::ParametricVoter),
    /// `[6; 4, 3, 2, 1]` where A is a leader-led team with member weights
    /// {1, 1, 2}.
    FourPlayerTeam,
    /// As above with four single-vote members.
    FourPlayerUniformTeam,
    /// Senate cloture `[60; 53, 45, 2]`: two party teams and two
    /// independents voting as a random block.
    Senate,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::FourPlayerRandom,
        Preset::FourPlayerPmf,
        Preset::FourPlayerParametric(crate::sweep::ParametricVoter::A),
        Preset::FourPlayerParametric(crate::sweep::ParametricVoter::B),
        Preset::FourPlayerParametric(crate::sweep::ParametricVoter::C),
        Preset::FourPlayerParametric(crate::sweep::ParametricVoter::D),
        Preset::FourPlayerTeam,
        Preset::FourPlayerUniformTeam,
        Preset::Senate,
    ];

    pub fn name(self) -> &'static str {
        use crate::sweep::ParametricVoter as V;
        match self {
            Preset::FourPlayerRandom => "paper-6-4321-random",
            Preset::FourPlayerPmf => "paper-sec32",
            Preset::FourPlayerParametric(V::A) => "paper-eq25",
            Preset::FourPlayerParametric(V::B) => "paper-eq26",
            Preset::FourPlayerParametric(V::C) => "paper-eq27",
            Preset::FourPlayerParametric(V::D) => "paper-eq28",
            Preset::FourPlayerTeam => "paper-eq31",
            Preset::FourPlayerUniformTeam => "paper-eq32",
            Preset::Senate => "senate-113",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.name()).collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown preset {s:?}; available: {}",
                    Self::names().join(", ")
                ))
            })
    }
}

/// How the two measured party-line voting rates map onto the Senate teams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Cohesion {
    /// `p_D = 0.84`, `p_R = 0.94`: the values actually plugged into the
    /// model and marked on the power contour plots.
    #[default]
    Assigned,
    /// `p_D = 0.94`, `p_R = 0.84`: the measured party averages taken at face
    /// value (Democrats 94%, Republicans 84%).
    PartyAverages,
}

impl Cohesion {
    pub fn name(self) -> &'static str {
        match self {
            Cohesion::Assigned => "paper-figure",
            Cohesion::PartyAverages => "paper-text",
        }
    }

    /// `(p_D, p_R)`.
    pub fn values(self) -> (Rational, Rational) {
        match self {
            Cohesion::Assigned => (ratio(84, 100), ratio(94, 100)),
            Cohesion::PartyAverages => (ratio(94, 100), ratio(84, 100)),
        }
    }
}

impl FromStr for Cohesion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-figure" => Ok(Cohesion::Assigned),
            "paper-text" => Ok(Cohesion::PartyAverages),
            _ => Err(Error::Invalid(format!(
                "unknown cohesion assignment {s:?}; expected paper-figure or paper-text"
            ))),
        }
    }
}

/// Overrides for preset parameters. Unset fields take the preset default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresetOptions {
    /// `p` of the parametric player or team (default 1/2).
    pub p: Option<Rational>,
    /// `L` of the team (default 1/2).
    pub leader: Option<Rational>,
    pub cohesion: Cohesion,
    /// Democratic leader's wish (default 1).
    pub leader_dem: Option<Rational>,
    /// Republican leader's wish (default 0).
    pub leader_rep: Option<Rational>,
    /// Democratic cohesion (default from `cohesion`).
    pub p_dem: Option<Rational>,
    /// Republican cohesion (default from `cohesion`).
    pub p_rep: Option<Rational>,
}

const FOUR_WEIGHTS: [(&str, u64); 4] = [("A", 4), ("B", 3), ("C", 2), ("D", 1)];

fn four_player_game(first: StructureSpec, replace: Option<usize>) -> Result<Game> {
    let players = FOUR_WEIGHTS
        .iter()
        .enumerate()
        .map(|(i, (name, w))| {
            let spec = if Some(i) == replace {
                first.clone()
            } else {
                StructureSpec::Random { votes: *w }
            };
            Player::new(*name, spec)
        })
        .collect::<Result<Vec<_>>>()?;
    Game::new(6, players)
}

pub fn preset_game(preset: Preset, opts: &PresetOptions) -> Result<Game> {
    let half = ratio(1, 2);
    let p = opts.p.clone().unwrap_or_else(|| half.clone());
    let leader = opts.leader.clone().unwrap_or_else(|| half.clone());
    match preset {
        Preset::FourPlayerRandom => four_player_game(StructureSpec::Random { votes: 4 }, None),
        Preset::FourPlayerPmf => four_player_game(
            StructureSpec::Pmf {
                entries: vec![
                    (0, ratio(1, 10)),
                    (2, ratio(4, 10)),
                    (3, ratio(3, 10)),
                    (4, ratio(2, 10)),
                ],
            },
            Some(0),
        ),
        Preset::FourPlayerParametric(voter) => {
            let i = voter.index();
            four_player_game(
                StructureSpec::Bernoulli {
                    votes: FOUR_WEIGHTS[i].1,
                    p,
                },
                Some(i),
            )
        }
        Preset::FourPlayerTeam => four_player_game(
            StructureSpec::Team {
                weights: vec![1, 1, 2],
                p,
                leader,
            },
            Some(0),
        ),
        Preset::FourPlayerUniformTeam => {
            four_player_game(StructureSpec::UniformTeam { n: 4, p, leader }, Some(0))
        }
        Preset::Senate => {
            let (pd, pr) = opts.cohesion.values();
            let players = vec![
                Player::new(
                    "Dem",
                    StructureSpec::UniformTeam {
                        n: 53,
                        p: opts.p_dem.clone().unwrap_or(pd),
                        leader: opts.leader_dem.clone().unwrap_or_else(Rational::one),
                    },
                )?,
                Player::new(
                    "Rep",
                    StructureSpec::UniformTeam {
                        n: 45,
                        p: opts.p_rep.clone().unwrap_or(pr),
                        leader: opts.leader_rep.clone().unwrap_or_else(|| int(0)),
                    },
                )?,
                Player::new("Ind", StructureSpec::Random { votes: 2 })?,
            ];
            Game::new(60, players)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in Preset::names() {
            let preset: Preset = name.parse().unwrap();
            assert_eq!(preset.name(), name);
            assert!(preset_game(preset, &PresetOptions::default()).is_ok());
        }
        assert!("paper-eq99".parse::<Preset>().is_err());
    }

    #[test]
    fn senate_defaults() {
        let game = preset_game(Preset::Senate, &PresetOptions::default()).unwrap();
        assert_eq!(game.quota(), 60);
        assert_eq!(game.names(), vec!["Dem", "Rep", "Ind"]);
        assert_eq!(game.total_max_votes(), 100);
        assert!(game.is_proper());
    }
}
