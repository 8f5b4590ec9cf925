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

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid range: lower bound {lo} exceeds upper bound {hi}")]
    InvalidRange { lo: usize, hi: usize },

    #[error("invalid weight {0}: vote counts must be positive")]
    InvalidWeight(u64),

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("probabilities sum to {0}, expected exactly 1")]
    NotNormalized(String),

    #[error("vote count {0} appears more than once")]
    DuplicateVotes(usize),

    #[error("cannot parse {0:?} as an exact rational")]
    ParseRational(String),

    #[error("quota must be at least 1")]
    InvalidQuota,

    #[error("a game needs at least one player")]
    NoPlayers,

    #[error("player names must be non-empty")]
    EmptyName,

    #[error("duplicate player name {0:?}")]
    DuplicatePlayer(String),

    #[error("unknown player {0:?}")]
    UnknownPlayer(String),

    #[error("invalid game document: {0}")]
    Schema(String),

    /// Wraps an error with the location (field path and player) it came from.
    #[error("{path}: {source}")]
    At { path: String, source: Box<Error> },

    #[error("every influence is zero; normalized power is undefined")]
    Degenerate,

    #[error("{players} players exceed the enumeration cap of {cap}; use the generating-function path instead")]
    Capacity { players: usize, cap: usize },

    #[error("enumeration would visit {tuples} outcome tuples, above the limit of {limit}")]
    SupportExplosion { tuples: u128, limit: u128 },

    #[error("invalid parameter reference {0:?}")]
    InvalidParam(String),

    #[error("step {step} moves parameter {param} from {value} outside [0, 1]")]
    StepOutOfRange {
        param: String,
        value: String,
        step: String,
    },

    #[error("parameter {param} at {value} lies within step {step} of the kink at p = 1/2")]
    Kink {
        param: String,
        value: String,
        step: String,
    },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Prefixes the error's location with `path`, joining nested paths with
    /// dots.
    pub(crate) fn at(self, path: impl Into<String>) -> Error {
        let path = path.into();
        match self {
            Error::At {
                path: inner,
                source,
            } => Error::At {
                path: format!("{path}.{inner}"),
                source,
            },
            other => Error::At {
                path,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with any location wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
