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

//! Voting power for weighted voting games in which each player's vote is a
//! probability distribution over how many votes they cast.
//!
//! The classic Banzhaf index counts, over all coalitions, how often each
//! player's entry or exit flips the outcome. Here every player instead has
//! a *voting structure* `G(x) = sum_j g_j x^j` (the chance of casting `j`
//! votes), which covers random all-or-nothing voting, partial or biased
//! voting, and teams that follow a leader imperfectly. A player's
//! *influence polynomial* records, for each losing total `Z` the others
//! might reach, how much of the player's behaviour is still in play:
//! `min(v_Z, 1 - v_Z)` with `v_Z` the chance the player lifts that
//! coalition to the quota. Dotting it with the others' losing-total
//! distribution gives the player's influence; normalizing across players
//! gives the generalized Banzhaf power, which equals the classic index
//! whenever everyone votes randomly.
//!
//! ```
//! use votepower::{generalized_banzhaf, Game};
//! use votepower::rational::ratio;
//!
//! let game = Game::random_voting(6, &[4, 3, 2, 1]).unwrap();
//! let report = generalized_banzhaf(&game).unwrap();
//! assert_eq!(report.powers[0], ratio(5, 12));
//! ```

pub mod error;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod power;
pub mod presets;
pub mod rational;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{load_game, Game, ParamField, Player, StructureSpec, TeamParams, VoteDistribution};
pub use oracle::{influence_first_principles, joint_distribution_enum, monte_carlo_influence, McEstimate};
pub use poly::RationalPoly;
pub use power::{
    classic_banzhaf, classic_banzhaf_with_cap, generalized_banzhaf, generalized_banzhaf_with,
    influence, influence_polynomial, influence_polynomial_with, influence_with, losing_tail,
    BanzhafReport, InfluenceMode, PowerReport,
};
pub use presets::{preset_game, Cohesion, Preset, PresetOptions};
pub use rational::Rational;
pub use sweep::{
    closed_form_beta, sensitivity, sensitivity_with, structure_series, structure_series_with,
    sweep, sweep_with, Axis, CsvFormat, ParamRef, ParametricVoter, SensitivityReport,
    StructureSeries, SweepGrid,
};
