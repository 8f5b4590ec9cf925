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

//! Parameter sweeps, closed-form checks for single-parameter games, central
//! finite-difference sensitivities, and plot-ready coefficient series.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Game, ParamField, StructureSpec, VoteDistribution};
use crate::power::{generalized_banzhaf_with, influence_polynomial_with, InfluenceMode, PowerReport};
use crate::rational::{
    format_rational_sig, in_unit_interval, int, ratio, to_f64, to_fraction_string, Rational,
};

/// A tunable parameter of one player, written `player.p` or `player.L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamRef {
    pub player: String,
    pub field: ParamField,
}

impl ParamRef {
    pub fn new(player: impl Into<String>, field: ParamField) -> Self {
        Self {
            player: player.into(),
            field,
        }
    }

    /// Column label used in CSV headers, e.g. `p_Dem`.
    pub fn column(&self) -> String {
        format!("{}_{}", self.field, self.player)
    }

    /// Current value of the parameter in `game`.
    pub fn current(&self, game: &Game) -> Result<Rational> {
        let player = game.player(&self.player)?;
        player
            .spec()
            .param(self.field)
            .cloned()
            .ok_or_else(|| self.not_exposed(player.spec()))
    }

    fn not_exposed(&self, spec: &StructureSpec) -> Error {
        Error::InvalidParam(format!(
            "{self}: a {} structure has no parameter {}",
            spec.kind(),
            self.field
        ))
    }

    /// Copy of `game` with this parameter set to `value`.
    pub fn apply(&self, game: &Game, value: &Rational) -> Result<Game> {
        if !in_unit_interval(value) {
            return Err(Error::ProbabilityOutOfRange(to_fraction_string(value)).at(self.to_string()));
        }
        let idx = game.index_of(&self.player)?;
        let spec = game.players()[idx].spec();
        let moved = spec
            .with_param(self.field, value.clone())
            .ok_or_else(|| self.not_exposed(spec))?;
        game.with_spec(idx, moved)
    }
}

impl fmt::Display for ParamRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.player, self.field)
    }
}

impl FromStr for ParamRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (player, field) = s
            .rsplit_once('.')
            .ok_or_else(|| Error::InvalidParam(s.to_string()))?;
        let field = match field {
            "p" => ParamField::P,
            "L" => ParamField::L,
            _ => return Err(Error::InvalidParam(s.to_string())),
        };
        if player.is_empty() {
            return Err(Error::InvalidParam(s.to_string()));
        }
        Ok(Self::new(player, field))
    }
}

/// One swept parameter and the values it takes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    pub param: ParamRef,
    pub values: Vec<Rational>,
}

impl Axis {
    pub fn new(param: ParamRef, values: Vec<Rational>) -> Self {
        Self { param, values }
    }

    /// `steps` evenly spaced values from `from` to `to`, both included, with
    /// exact rational spacing.
    pub fn linspace(param: ParamRef, from: &Rational, to: &Rational, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Invalid("a sweep axis needs at least one step".into()));
        }
        let values = if steps == 1 {
            vec![from.clone()]
        } else {
            let width = (to - from) / int(steps as i64 - 1);
            (0..steps)
                .map(|i| from + &width * int(i as i64))
                .collect()
        };
        Ok(Self { param, values })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepCell {
    /// Parameter values, one per axis.
    pub point: Vec<Rational>,
    /// `None` when every influence vanishes at this point.
    pub report: Option<PowerReport>,
}

/// Power reports over a 1-D or 2-D parameter grid, in row-major order
/// (the first axis varies slowest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepGrid {
    pub axes: Vec<Axis>,
    pub names: Vec<String>,
    pub cells: Vec<SweepCell>,
}

/// Numeric rendering options for CSV output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsvFormat {
    /// Significant digits for decimal output.
    pub precision: usize,
    /// Write `num/den` instead of decimals.
    pub exact: bool,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self {
            precision: 6,
            exact: false,
        }
    }
}

impl CsvFormat {
    pub fn render(&self, value: &Rational) -> String {
        if self.exact {
            to_fraction_string(value)
        } else {
            format_rational_sig(value, self.precision)
        }
    }
}

impl SweepGrid {
    pub fn to_csv(&self, format: CsvFormat) -> String {
        let mut out = String::new();
        let header: Vec<String> = self
            .axes
            .iter()
            .map(|a| a.param.column())
            .chain(self.names.iter().map(|n| format!("beta_{n}")))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for cell in &self.cells {
            let mut row: Vec<String> = cell.point.iter().map(|v| format.render(v)).collect();
            match &cell.report {
                Some(r) => row.extend(r.powers.iter().map(|v| format.render(v))),
                None => row.extend(std::iter::repeat_n(String::new(), self.names.len())),
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Cell at the given per-axis indices.
    pub fn cell(&self, indices: &[usize]) -> Option<&SweepCell> {
        if indices.len() != self.axes.len() {
            return None;
        }
        let mut flat = 0;
        for (axis, &i) in self.axes.iter().zip(indices) {
            if i >= axis.values.len() {
                return None;
            }
            flat = flat * axis.values.len() + i;
        }
        self.cells.get(flat)
    }
}

fn check_axes(game: &Game, axes: &[Axis]) -> Result<()> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Invalid(format!(
            "a sweep takes one or two axes, got {}",
            axes.len()
        )));
    }
    for axis in axes {
        axis.param.current(game)?;
        if let Some(bad) = axis.values.iter().find(|v| !in_unit_interval(v)) {
            return Err(Error::ProbabilityOutOfRange(to_fraction_string(bad)).at(axis.param.to_string()));
        }
    }
    if axes.len() == 2 && axes[0].param == axes[1].param {
        return Err(Error::InvalidParam(format!("{} swept twice", axes[0].param)));
    }
    Ok(())
}

fn game_at(game: &Game, params: &[&ParamRef], point: &[Rational]) -> Result<Game> {
    params
        .iter()
        .zip(point)
        .try_fold(game.clone(), |g, (param, v)| param.apply(&g, v))
}

pub fn sweep(game: &Game, axes: &[Axis]) -> Result<SweepGrid> {
    sweep_with(game, axes, InfluenceMode::Extended)
}

/// Evaluates the generalized index at every grid point. Points where every
/// influence vanishes are recorded as undefined cells.
pub fn sweep_with(game: &Game, axes: &[Axis], mode: InfluenceMode) -> Result<SweepGrid> {
    check_axes(game, axes)?;
    let params: Vec<&ParamRef> = axes.iter().map(|a| &a.param).collect();
    let points: Vec<Vec<Rational>> = match axes {
        [a] => a.values.iter().map(|v| vec![v.clone()]).collect(),
        [a, b] => a
            .values
            .iter()
            .flat_map(|u| b.values.iter().map(move |v| vec![u.clone(), v.clone()]))
            .collect(),
        _ => unreachable!("axis count checked above"),
    };
    let cells = points
        .into_par_iter()
        .map(|point| {
            let g = game_at(game, &params, &point)?;
            let report = match generalized_banzhaf_with(&g, mode) {
                Ok(r) => Some(r),
                Err(Error::Degenerate) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepCell { point, report })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        axes: axes.to_vec(),
        names: game.names(),
        cells,
    })
}

/// Which player of the `[6; 4, 3, 2, 1]` game votes `(1 - p) + p x^w` while
/// the others vote randomly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParametricVoter {
    A,
    B,
    C,
    D,
}

impl ParametricVoter {
    pub const ALL: [ParametricVoter; 4] = [Self::A, Self::B, Self::C, Self::D];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Printed closed forms for the four single-parameter variants of
/// `[6; 4, 3, 2, 1]`, with `m = min(p, 1 - p)`.
pub fn closed_form_beta(which: ParametricVoter, p: &Rational) -> Result<[Rational; 4]> {
    if !in_unit_interval(p) {
        return Err(Error::ProbabilityOutOfRange(to_fraction_string(p)));
    }
    let one = Rational::one();
    let q = &one - p;
    let m = if *p <= q { p.clone() } else { q.clone() };
    let (num, delta) = match which {
        ParametricVoter::A => (
            [int(5) * &m, &one + p, &one + p, q.clone()],
            int(3) + p + int(5) * &m,
        ),
        ParametricVoter::B => (
            [int(2) + p, int(3) * &m, int(2) - p, p.clone()],
            int(4) + p + int(3) * &m,
        ),
        ParametricVoter::C => (
            [int(2) + p, int(2) - p, int(3) * &m, p.clone()],
            int(4) + p + int(3) * &m,
        ),
        ParametricVoter::D => (
            [int(3) - p, &one + p, &one + p, m.clone()],
            int(5) + p + &m,
        ),
    };
    Ok(num.map(|n| n / &delta))
}

/// Central-difference partial derivatives of every player's power with
/// respect to a set of parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityReport {
    pub params: Vec<ParamRef>,
    pub point: Vec<Rational>,
    pub step: Rational,
    /// Powers at the point itself.
    pub base: PowerReport,
    /// `partials[player][param]`, exact.
    pub partials: Vec<Vec<Rational>>,
}

impl SensitivityReport {
    pub fn partial(&self, player: &str, param: &ParamRef) -> Option<f64> {
        let i = self.base.names.iter().position(|n| n == player)?;
        let k = self.params.iter().position(|p| p == param)?;
        Some(to_f64(&self.partials[i][k]))
    }
}

pub fn sensitivity(
    game: &Game,
    params: &[ParamRef],
    point: &[Rational],
    h: &Rational,
) -> Result<SensitivityReport> {
    sensitivity_with(game, params, point, h, InfluenceMode::Extended)
}

/// `(beta(x + h) - beta(x - h)) / 2h` per (player, parameter), exact.
///
/// Refuses steps that leave `[0, 1]`, and for bernoulli `p` refuses points
/// whose stencil would straddle the `min(p, 1 - p)` kink at one half.
pub fn sensitivity_with(
    game: &Game,
    params: &[ParamRef],
    point: &[Rational],
    h: &Rational,
    mode: InfluenceMode,
) -> Result<SensitivityReport> {
    if !h.is_positive() {
        return Err(Error::Invalid(format!(
            "finite-difference step must be positive, got {}",
            to_fraction_string(h)
        )));
    }
    if params.is_empty() || params.len() != point.len() {
        return Err(Error::Invalid(format!(
            "{} parameters but {} point coordinates",
            params.len(),
            point.len()
        )));
    }
    let half = ratio(1, 2);
    for (param, value) in params.iter().zip(point) {
        let spec = game.player(&param.player)?.spec();
        param.current(game)?;
        let lo = value - h;
        let hi = value + h;
        if !in_unit_interval(&lo) || !in_unit_interval(&hi) {
            return Err(Error::StepOutOfRange {
                param: param.to_string(),
                value: to_fraction_string(value),
                step: to_fraction_string(h),
            });
        }
        let straddles = (value - &half).abs() < *h;
        if straddles && param.field == ParamField::P && matches!(spec, StructureSpec::Bernoulli { .. }) {
            return Err(Error::Kink {
                param: param.to_string(),
                value: to_fraction_string(value),
                step: to_fraction_string(h),
            });
        }
    }
    let refs: Vec<&ParamRef> = params.iter().collect();
    let base_game = game_at(game, &refs, point)?;
    let base = generalized_banzhaf_with(&base_game, mode)?;
    let two_h = h * int(2);

    let columns = params
        .par_iter()
        .map(|param| {
            let value = param.current(&base_game)?;
            let up = generalized_banzhaf_with(&param.apply(&base_game, &(&value + h))?, mode)?;
            let down = generalized_banzhaf_with(&param.apply(&base_game, &(&value - h))?, mode)?;
            Ok(up
                .powers
                .iter()
                .zip(&down.powers)
                .map(|(a, b)| (a - b) / &two_h)
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let partials = (0..base.names.len())
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    Ok(SensitivityReport {
        params: params.to_vec(),
        point: point.to_vec(),
        step: h.clone(),
        base,
        partials,
    })
}

/// Dense coefficient series of a structure and of its influence polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureSeries {
    /// `pmf[j]` = probability of casting `j` votes, `j = 0..=max_votes`.
    pub pmf: Vec<Rational>,
    /// `influence[z]` = influence coefficient for a `z`-vote coalition,
    /// `z = 0..quota`.
    pub influence: Vec<Rational>,
}

pub fn structure_series(dist: &VoteDistribution, quota: usize) -> StructureSeries {
    structure_series_with(dist, quota, InfluenceMode::Extended)
}

pub fn structure_series_with(
    dist: &VoteDistribution,
    quota: usize,
    mode: InfluenceMode,
) -> StructureSeries {
    let pmf = (0..=dist.max_votes()).map(|j| dist.prob(j)).collect();
    let ip = influence_polynomial_with(dist, quota, mode);
    let influence = (0..quota).map(|z| ip.coeff(z)).collect();
    StructureSeries { pmf, influence }
}

impl StructureSeries {
    /// `degree,pmf,influence`; cells past the end of a series are empty.
    pub fn to_csv(&self, format: CsvFormat) -> String {
        let mut out = String::from("degree,pmf,influence\n");
        let rows = self.pmf.len().max(self.influence.len());
        let cell = |s: &[Rational], i: usize| s.get(i).map(|v| format.render(v)).unwrap_or_default();
        for i in 0..rows {
            out.push_str(&format!(
                "{i},{},{}\n",
                cell(&self.pmf, i),
                cell(&self.influence, i)
            ));
        }
        out
    }

    pub fn influence_is_zero(&self) -> bool {
        self.influence.iter().all(Zero::is_zero)
    }
}
