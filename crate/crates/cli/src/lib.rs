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

//! Command-line front end for `votepower`.
//!
//! [`run`] turns parsed arguments into the exact bytes the binary prints, so
//! tests can drive every command without spawning a process.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;
use votepower::power::{influence_polynomial_with, InfluenceMode, DEFAULT_ENUMERATION_CAP};
use votepower::rational::{format_rational_sig, parse_rational, to_f64, to_fraction_string};
use votepower::{
    classic_banzhaf_with_cap, generalized_banzhaf_with, influence_first_principles, load_game,
    monte_carlo_influence, preset_game, sensitivity_with, structure_series_with, sweep_with, Axis,
    Cohesion, CsvFormat, Game, ParamField, ParamRef, Preset, PresetOptions, Rational, StructureSpec,
};

#[derive(Debug, Parser)]
#[command(name = "votepower", version, about = "Banzhaf and generalized Banzhaf voting power")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Significant digits for decimal output.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u16).range(1..=40))]
    pub precision: u16,

    /// Print exact fractions instead of decimals.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Count only coalition sizes 1..q-1 and support below the quota when
    /// building influence polynomials.
    #[arg(long, global = true)]
    pub strict_influence: bool,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Generalized Banzhaf influence and power of every player.
    Power(GameArgs),
    /// Classic Banzhaf power by coalition enumeration.
    Banzhaf {
        quota: u64,
        #[arg(required = true, num_args = 1..)]
        weights: Vec<u64>,
        /// Largest number of players to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Coefficients of one player's influence polynomial.
    InfluencePoly {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        player: String,
    },
    /// Powers over a one- or two-parameter grid, as CSV.
    Sweep {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        grid: SweepArgs,
    },
    /// Central-difference partial derivatives of every power.
    Sensitivity {
        #[command(flatten)]
        game: GameArgs,
        /// `PLAYER.FIELD` or `PLAYER.FIELD=VALUE`; repeatable. Defaults to
        /// every `p` parameter at its current value.
        #[arg(long = "param", value_name = "PARAM")]
        params: Vec<String>,
        /// Finite-difference step.
        #[arg(long, default_value = "1/1000", value_parser = rational_arg)]
        h: Rational,
    },
    /// Vote distribution and influence coefficients of one player, as CSV.
    Series {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        player: String,
    },
    /// Cross-check the influence computation against enumeration, classic
    /// Banzhaf and Monte Carlo sampling.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Monte Carlo tolerance in standard errors.
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
    },
    /// Write the game as a JSON document.
    Export(GameArgs),
}

/// Where the game comes from, plus preset parameter overrides.
#[derive(Debug, Args, Default)]
pub struct GameArgs {
    /// Bundled example game.
    #[arg(long, conflicts_with = "game", required_unless_present = "game")]
    pub preset: Option<String>,
    /// Game description in JSON.
    #[arg(long, value_name = "FILE")]
    pub game: Option<PathBuf>,
    /// Obedience `p` of the parametric player or team.
    #[arg(long, value_parser = rational_arg)]
    pub p: Option<Rational>,
    /// Leader's wish `L` of the team.
    #[arg(long = "L", value_name = "L", value_parser = rational_arg)]
    pub leader: Option<Rational>,
    /// Democratic leader's wish.
    #[arg(long = "LD", value_name = "L", value_parser = rational_arg)]
    pub leader_dem: Option<Rational>,
    /// Republican leader's wish.
    #[arg(long = "LR", value_name = "L", value_parser = rational_arg)]
    pub leader_rep: Option<Rational>,
    /// Democratic cohesion.
    #[arg(long = "pD", value_name = "P", value_parser = rational_arg)]
    pub p_dem: Option<Rational>,
    /// Republican cohesion.
    #[arg(long = "pR", value_name = "P", value_parser = rational_arg)]
    pub p_rep: Option<Rational>,
    /// Which measured rate goes to which party: paper-figure or paper-text.
    #[arg(long)]
    pub cohesion: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Swept parameter, `PLAYER.FIELD`.
    #[arg(long)]
    pub param: String,
    #[arg(long, value_parser = rational_arg)]
    pub from: Rational,
    #[arg(long, value_parser = rational_arg)]
    pub to: Rational,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// Optional second axis.
    #[arg(long, requires_all = ["from2", "to2", "steps2"])]
    pub param2: Option<String>,
    #[arg(long, value_parser = rational_arg, requires = "param2")]
    pub from2: Option<Rational>,
    #[arg(long, value_parser = rational_arg, requires = "param2")]
    pub to2: Option<Rational>,
    #[arg(long, requires = "param2")]
    pub steps2: Option<usize>,
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] votepower::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0} verification check(s) failed")]
    Verification(usize),
}

impl CliError {
    /// 2 input error, 3 degenerate game, 4 capacity, 5 verification failure.
    pub fn exit_code(&self) -> u8 {
        use votepower::Error as E;
        match self {
            CliError::Core(e) => match e.root() {
                E::Degenerate => 3,
                E::Capacity { .. } | E::SupportExplosion { .. } => 4,
                _ => 2,
            },
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Verification(_) => 5,
        }
    }
}

/// What a command produced. `failures` is non-zero only for `verify`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub failures: usize,
}

impl Output {
    fn ok(body: String) -> Self {
        Self { body, failures: 0 }
    }
}

/// Runs the command and writes its output to `--out` or standard output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let output = run(cli)?;
    match &cli.out {
        Some(path) => fs::write(path, &output.body).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => print!("{}", output.body),
    }
    if output.failures > 0 {
        return Err(CliError::Verification(output.failures));
    }
    Ok(())
}

/// Runs the command and returns what it would print.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fmt = Format {
        precision: cli.precision as usize,
        exact: cli.exact,
    };
    let mode = if cli.strict_influence {
        InfluenceMode::Strict
    } else {
        InfluenceMode::Extended
    };
    match &cli.command {
        Command::Power(args) => cmd_power(&args.load()?, mode, fmt).map(Output::ok),
        Command::Banzhaf {
            quota,
            weights,
            cap,
        } => cmd_banzhaf(*quota, weights, *cap, fmt).map(Output::ok),
        Command::InfluencePoly { game, player } => {
            cmd_influence_poly(&game.load()?, player, mode, fmt).map(Output::ok)
        }
        Command::Sweep { game, grid } => cmd_sweep(&game.load()?, grid, mode, fmt).map(Output::ok),
        Command::Sensitivity { game, params, h } => {
            cmd_sensitivity(&game.load()?, params, h, mode, fmt).map(Output::ok)
        }
        Command::Series { game, player } => {
            cmd_series(&game.load()?, player, mode, fmt).map(Output::ok)
        }
        Command::Verify {
            game,
            trials,
            seed,
            sigmas,
        } => {
            if cli.strict_influence {
                return Err(CliError::Usage(
                    "verify checks the extended influence definition; drop --strict-influence"
                        .into(),
                ));
            }
            cmd_verify(&game.load()?, *trials, *seed, *sigmas, fmt)
        }
        Command::Export(args) => Ok(Output::ok(args.load()?.to_json_pretty() + "\n")),
    }
}

#[derive(Clone, Copy, Debug)]
struct Format {
    precision: usize,
    exact: bool,
}

impl Format {
    fn decimal(self, value: &Rational) -> Value {
        number(&format_rational_sig(value, self.precision))
    }

    /// A fraction string under `--exact`, a decimal number otherwise.
    fn value(self, value: &Rational) -> Value {
        if self.exact {
            Value::String(to_fraction_string(value))
        } else {
            self.decimal(value)
        }
    }

    fn both(self, value: &Rational) -> Value {
        json!({
            "fraction": to_fraction_string(value),
            "decimal": self.decimal(value),
        })
    }

    fn text(self, value: &Rational) -> String {
        if self.exact {
            to_fraction_string(value)
        } else {
            format_rational_sig(value, self.precision)
        }
    }

    fn csv(self) -> CsvFormat {
        CsvFormat {
            precision: self.precision,
            exact: self.exact,
        }
    }
}

/// JSON number whose printed form is exactly the rounded decimal.
fn number(decimal: &str) -> Value {
    if let Ok(n) = decimal.parse::<i64>() {
        return Value::from(n);
    }
    decimal
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(decimal.to_string()))
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

fn mode_name(mode: InfluenceMode) -> &'static str {
    match mode {
        InfluenceMode::Extended => "extended",
        InfluenceMode::Strict => "strict",
    }
}

impl GameArgs {
    pub fn load(&self) -> Result<Game, CliError> {
        match (&self.preset, &self.game) {
            (Some(name), None) => {
                let preset: Preset = name.parse()?;
                self.check_overrides(preset)?;
                let cohesion = match &self.cohesion {
                    Some(c) => c.parse::<Cohesion>()?,
                    None => Cohesion::default(),
                };
                let opts = PresetOptions {
                    p: self.p.clone(),
                    leader: self.leader.clone(),
                    cohesion,
                    leader_dem: self.leader_dem.clone(),
                    leader_rep: self.leader_rep.clone(),
                    p_dem: self.p_dem.clone(),
                    p_rep: self.p_rep.clone(),
                };
                Ok(preset_game(preset, &opts)?)
            }
            (None, Some(path)) => {
                if self.overrides().iter().any(|(_, set)| *set) {
                    return Err(CliError::Usage(
                        "preset parameter flags cannot be combined with --game".into(),
                    ));
                }
                let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                load_game(&text).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            }
            _ => Err(CliError::Usage(
                "exactly one of --preset or --game is required".into(),
            )),
        }
    }

    fn overrides(&self) -> [(&'static str, bool); 7] {
        [
            ("--p", self.p.is_some()),
            ("--L", self.leader.is_some()),
            ("--LD", self.leader_dem.is_some()),
            ("--LR", self.leader_rep.is_some()),
            ("--pD", self.p_dem.is_some()),
            ("--pR", self.p_rep.is_some()),
            ("--cohesion", self.cohesion.is_some()),
        ]
    }

    fn check_overrides(&self, preset: Preset) -> Result<(), CliError> {
        let accepted: &[&str] = match preset {
            Preset::FourPlayerRandom | Preset::FourPlayerPmf => &[],
            Preset::FourPlayerParametric(_) => &["--p"],
            Preset::FourPlayerTeam | Preset::FourPlayerUniformTeam => &["--p", "--L"],
            Preset::Senate => &["--LD", "--LR", "--pD", "--pR", "--cohesion"],
        };
        for (flag, set) in self.overrides() {
            if set && !accepted.contains(&flag) {
                return Err(CliError::Usage(format!(
                    "{flag} does not apply to preset {preset}"
                )));
            }
        }
        Ok(())
    }
}

fn cmd_power(game: &Game, mode: InfluenceMode, fmt: Format) -> Result<String, CliError> {
    let report = generalized_banzhaf_with(game, mode)?;
    let players: Vec<Value> = report
        .names
        .iter()
        .zip(report.influences.iter().zip(&report.powers))
        .map(|(name, (influence, power))| {
            json!({
                "name": name,
                "influence": fmt.both(influence),
                "power": fmt.both(power),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "quota": game.quota(),
        "proper": report.proper_game,
        "influence_mode": mode_name(mode),
        "total_influence": fmt.both(&report.total_influence()),
        "players": players,
    })))
}

fn cmd_banzhaf(quota: u64, weights: &[u64], cap: usize, fmt: Format) -> Result<String, CliError> {
    let report = classic_banzhaf_with_cap(quota, weights, cap)?;
    let players: Vec<Value> = weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            json!({
                "name": format!("P{}", i + 1),
                "weight": w,
                "marginal_count": report.marginal_counts[i],
                "power": fmt.both(&report.powers[i]),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "quota": quota,
        "total_count": report.total_count(),
        "players": players,
    })))
}

fn cmd_influence_poly(
    game: &Game,
    player: &str,
    mode: InfluenceMode,
    fmt: Format,
) -> Result<String, CliError> {
    let structure = game.player(player)?.structure();
    let poly = influence_polynomial_with(structure, game.quota(), mode);
    let coefficients: Vec<Value> = poly
        .terms()
        .map(|(degree, c)| {
            json!({
                "degree": degree,
                "fraction": to_fraction_string(c),
                "decimal": fmt.decimal(c),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "player": player,
        "quota": game.quota(),
        "influence_mode": mode_name(mode),
        "polynomial": poly.to_string(),
        "coefficients": coefficients,
    })))
}

fn cmd_sweep(
    game: &Game,
    grid: &SweepArgs,
    mode: InfluenceMode,
    fmt: Format,
) -> Result<String, CliError> {
    let mut axes = vec![Axis::linspace(
        grid.param.parse()?,
        &grid.from,
        &grid.to,
        grid.steps,
    )?];
    if let (Some(param), Some(from), Some(to), Some(steps)) =
        (&grid.param2, &grid.from2, &grid.to2, grid.steps2)
    {
        axes.push(Axis::linspace(param.parse()?, from, to, steps)?);
    }
    Ok(sweep_with(game, &axes, mode)?.to_csv(fmt.csv()))
}

/// Parses `PLAYER.FIELD[=VALUE]`; a missing value means the current one.
fn sensitivity_point(game: &Game, text: &str) -> Result<(ParamRef, Rational), CliError> {
    let (name, value) = match text.split_once('=') {
        Some((name, value)) => (name, Some(parse_rational(value)?)),
        None => (text, None),
    };
    let param: ParamRef = name.parse()?;
    let value = match value {
        Some(v) => v,
        None => param.current(game)?,
    };
    Ok((param, value))
}

fn cmd_sensitivity(
    game: &Game,
    params: &[String],
    h: &Rational,
    mode: InfluenceMode,
    fmt: Format,
) -> Result<String, CliError> {
    let chosen: Vec<(ParamRef, Rational)> = if params.is_empty() {
        game.players()
            .iter()
            .filter(|p| p.spec().param(ParamField::P).is_some())
            .map(|p| {
                let param = ParamRef::new(p.name(), ParamField::P);
                let value = param.current(game)?;
                Ok((param, value))
            })
            .collect::<Result<_, CliError>>()?
    } else {
        params
            .iter()
            .map(|text| sensitivity_point(game, text))
            .collect::<Result<_, _>>()?
    };
    if chosen.is_empty() {
        return Err(CliError::Usage(
            "game has no adjustable p parameter; name one with --param".into(),
        ));
    }
    let (refs, point): (Vec<ParamRef>, Vec<Rational>) = chosen.into_iter().unzip();
    let report = sensitivity_with(game, &refs, &point, h, mode)?;

    let params: Vec<Value> = refs
        .iter()
        .zip(&point)
        .map(|(param, value)| json!({ "param": param.to_string(), "value": fmt.value(value) }))
        .collect();
    let players: Vec<Value> = report
        .base
        .names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut partials = Map::new();
            for (k, param) in refs.iter().enumerate() {
                partials.insert(param.to_string(), fmt.value(&report.partials[i][k]));
            }
            json!({
                "name": name,
                "power": fmt.value(&report.base.powers[i]),
                "partials": partials,
            })
        })
        .collect();
    Ok(pretty(&json!({
        "step": to_fraction_string(h),
        "influence_mode": mode_name(mode),
        "params": params,
        "players": players,
    })))
}

fn cmd_series(
    game: &Game,
    player: &str,
    mode: InfluenceMode,
    fmt: Format,
) -> Result<String, CliError> {
    let structure = game.player(player)?.structure();
    Ok(structure_series_with(structure, game.quota(), mode).to_csv(fmt.csv()))
}

fn cmd_verify(
    game: &Game,
    trials: u64,
    seed: u64,
    sigmas: f64,
    fmt: Format,
) -> Result<Output, CliError> {
    let report = generalized_banzhaf_with(game, InfluenceMode::Extended)?;
    let mut lines = Vec::new();
    let mut failures = 0;
    // `None` marks a check that could not run.
    let mut record = |pass: Option<bool>, line: String| {
        let status = match pass {
            Some(true) => "PASS",
            Some(false) => {
                failures += 1;
                "FAIL"
            }
            None => "SKIP",
        };
        lines.push(format!("{status} {line}"));
    };

    for (name, exact) in report.names.iter().zip(&report.influences) {
        match influence_first_principles(game, name) {
            Ok(direct) => record(
                Some(&direct == exact),
                format!(
                    "enumeration {name}: influence {} vs {}",
                    fmt.text(exact),
                    fmt.text(&direct)
                ),
            ),
            Err(e) if matches!(e.root(), votepower::Error::SupportExplosion { .. }) => {
                record(None, format!("enumeration {name}: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let weights: Option<Vec<u64>> = game
        .players()
        .iter()
        .map(|p| match p.spec() {
            StructureSpec::Random { votes } => Some(*votes),
            _ => None,
        })
        .collect();
    if let Some(weights) = weights.filter(|w| w.len() <= DEFAULT_ENUMERATION_CAP) {
        let classic = classic_banzhaf_with_cap(game.quota() as u64, &weights, DEFAULT_ENUMERATION_CAP)?;
        for (i, name) in report.names.iter().enumerate() {
            record(
                Some(classic.powers[i] == report.powers[i]),
                format!(
                    "classic {name}: power {} vs {}",
                    fmt.text(&report.powers[i]),
                    fmt.text(&classic.powers[i])
                ),
            );
        }
    }

    for (name, exact) in report.names.iter().zip(&report.influences) {
        let est = monte_carlo_influence(game, name, trials, seed)?;
        let exact = to_f64(exact);
        // A zero standard error means every draw agreed; allow for f64 rounding.
        let pass = est.within(exact, sigmas) || (est.mean - exact).abs() <= 1e-12;
        record(
            Some(pass),
            format!(
                "monte-carlo {name}: {} (se {}) vs exact {}, {trials} trials, seed {seed}",
                votepower::rational::format_sig(est.mean, fmt.precision),
                votepower::rational::format_sig(est.std_error, fmt.precision),
                votepower::rational::format_sig(exact, fmt.precision),
            ),
        );
    }

    let mut body = lines.join("\n");
    body.push('\n');
    Ok(Output { body, failures })
}
