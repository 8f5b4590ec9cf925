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

//! End-to-end runs of the `votepower` binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;
use votepower::rational::{parse_rational, ratio};
use votepower::{closed_form_beta, ParametricVoter, Rational};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn votepower(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_votepower"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json_ok(args: &[&str]) -> Value {
    let run = votepower(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    serde_json::from_str(&run.stdout).unwrap()
}

fn fractions(doc: &Value, field: &str) -> Vec<String> {
    doc["players"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[field]["fraction"].as_str().unwrap().to_string())
        .collect()
}

fn decimals(doc: &Value, field: &str) -> Vec<f64> {
    doc["players"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[field]["decimal"].as_f64().unwrap())
        .collect()
}

fn write_game(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn power_on_bundled_games() {
    let doc = json_ok(&["power", "--preset", "paper-6-4321-random"]);
    assert_eq!(fractions(&doc, "power"), ["5/12", "1/4", "1/4", "1/12"]);
    assert_eq!(fractions(&doc, "influence"), ["5/16", "3/16", "3/16", "1/16"]);
    assert_eq!(doc["proper"], Value::Bool(true));

    let doc = json_ok(&["power", "--preset", "paper-sec32"]);
    assert_eq!(fractions(&doc, "power"), ["7/30", "13/30", "1/5", "2/15"]);

    let doc = json_ok(&["power", "--preset", "senate-113", "--LD", "1", "--LR", "0"]);
    for (got, want) in decimals(&doc, "power").iter().zip([0.35, 0.35, 0.30]) {
        assert!((got - want).abs() <= 0.01, "{got} vs {want}");
    }
}

#[test]
fn banzhaf_counts_swings() {
    let doc = json_ok(&["banzhaf", "6", "4", "3", "2", "1"]);
    let counts: Vec<u64> = doc["players"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["marginal_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [10, 6, 6, 2]);
    assert_eq!(fractions(&doc, "power"), ["5/12", "1/4", "1/4", "1/12"]);

    let doc = json_ok(&["banzhaf", "3", "4"]);
    assert_eq!(doc["players"][0]["marginal_count"], 2);
    assert_eq!(fractions(&doc, "power"), ["1"]);
}

#[test]
fn banzhaf_agrees_with_power_on_random_senate() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        dir.path(),
        "senate.json",
        r#"{"quota": 60, "players": [
            {"name": "P1", "structure": {"kind": "random", "votes": 53}},
            {"name": "P2", "structure": {"kind": "random", "votes": 45}},
            {"name": "P3", "structure": {"kind": "random", "votes": 2}}]}"#,
    );
    let classic = json_ok(&["banzhaf", "60", "53", "45", "2"]);
    let general = json_ok(&["power", "--game", &game]);
    assert_eq!(fractions(&classic, "power"), fractions(&general, "power"));
}

#[test]
fn influence_polynomials() {
    let doc = json_ok(&["influence-poly", "--preset", "paper-sec32", "--player", "A"]);
    let terms: Vec<(u64, String)> = doc["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["degree"].as_u64().unwrap(), t["fraction"].as_str().unwrap().to_string()))
        .collect();
    let want = [(2, "1/5"), (3, "1/2"), (4, "1/10"), (5, "1/10")];
    assert_eq!(terms.len(), want.len());
    for ((d, c), (wd, wc)) in terms.iter().zip(want) {
        assert_eq!((*d, c.as_str()), (wd, wc));
    }

    let doc = json_ok(&["influence-poly", "--preset", "paper-6-4321-random", "--player", "B"]);
    assert_eq!(doc["polynomial"], "1/2*x^3 + 1/2*x^4 + 1/2*x^5");

    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        dir.path(),
        "fixed.json",
        r#"{"quota": 3, "players": [
            {"name": "bloc", "structure": {"kind": "deterministic", "votes": 2}},
            {"name": "swing", "structure": {"kind": "random", "votes": 1}}]}"#,
    );
    let doc = json_ok(&["influence-poly", "--game", &game, "--player", "bloc"]);
    assert_eq!(doc["coefficients"].as_array().unwrap().len(), 0);

    let run = votepower(&["influence-poly", "--preset", "paper-sec32", "--player", "Z"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("unknown player"), "{}", run.stderr);
}

#[test]
fn sweep_matches_closed_form_exactly() {
    let run = votepower(&[
        "sweep", "--preset", "paper-eq25", "--param", "A.p", "--from", "0", "--to", "1", "--steps",
        "21", "--exact",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let mut lines = run.stdout.lines();
    assert_eq!(lines.next(), Some("p_A,beta_A,beta_B,beta_C,beta_D"));
    let rows: Vec<Vec<Rational>> = lines
        .map(|l| l.split(',').map(|f| parse_rational(f).unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    for (k, row) in rows.iter().enumerate() {
        let p = ratio(k as i64, 20);
        assert_eq!(row[0], p);
        let want = closed_form_beta(ParametricVoter::A, &p).unwrap();
        assert_eq!(&row[1..], &want[..], "p = {p}");
    }
}

#[test]
fn two_axis_sweep_csv() {
    let run = votepower(&[
        "sweep", "--preset", "paper-eq31", "--param", "A.p", "--from", "0", "--to", "1",
        "--steps", "3", "--param2", "A.L", "--from2", "0", "--to2", "1", "--steps2", "3",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], "p_A,L_A,beta_A,beta_B,beta_C,beta_D");
    assert_eq!(lines.len(), 10);
    // Leader and members both certain: the team never swings.
    assert!(lines[1].starts_with("0,0,0,"), "{}", lines[1]);
}

#[test]
fn senate_sensitivity_defaults_to_every_cohesion() {
    let doc = json_ok(&["sensitivity", "--preset", "senate-113", "--LD", "1", "--LR", "0", "--h", "1/1000"]);
    let params: Vec<&str> = doc["params"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["param"].as_str().unwrap())
        .collect();
    assert_eq!(params, ["Dem.p", "Rep.p"]);
    let d = |player: usize, param: &str| doc["players"][player]["partials"][param].as_f64().unwrap();
    let got = [d(0, "Dem.p"), d(0, "Rep.p"), d(1, "Dem.p"), d(1, "Rep.p")];
    for (g, w) in got.iter().zip([0.04, -0.36, 0.06, -0.37]) {
        assert!((g - w).abs() <= 0.05, "{got:?}");
    }
}

#[test]
fn sensitivity_refuses_the_kink() {
    let run = votepower(&["sensitivity", "--preset", "paper-eq25", "--param", "A.p"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("kink"), "{}", run.stderr);
    let doc = json_ok(&["sensitivity", "--preset", "paper-eq25", "--param", "A.p=1/4", "--exact"]);
    assert_eq!(doc["params"][0]["value"], "1/4");
}

#[test]
fn series_is_binomial_for_an_undecided_team() {
    let run = votepower(&["series", "--preset", "paper-eq32", "--player", "A", "--exact"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let pmf: Vec<&str> = run
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .filter(|c| !c.is_empty())
        .collect();
    assert_eq!(pmf, ["1/16", "1/4", "3/8", "1/4", "1/16"]);
}

#[test]
fn verify_reports_pass_lines() {
    let run = votepower(&["verify", "--preset", "paper-6-4321-random", "--trials", "100000", "--seed", "7"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")), "{}", run.stdout);
    for check in ["enumeration", "classic", "monte-carlo"] {
        assert_eq!(lines.iter().filter(|l| l.contains(check)).count(), 4);
    }
}

#[test]
fn verify_failure_exits_five() {
    // Zero tolerance cannot hold for a sampled estimate.
    let run = votepower(&["verify", "--preset", "paper-sec32", "--trials", "1000", "--sigmas", "0"]);
    assert_eq!(run.code, 5, "{}", run.stdout);
    assert!(run.stdout.contains("FAIL monte-carlo"));
}

#[test]
fn exit_codes() {
    assert_eq!(votepower(&["power", "--preset", "no-such-game"]).code, 2);
    assert_eq!(votepower(&["power", "--preset", "paper-eq25", "--LD", "1"]).code, 2);
    assert_eq!(votepower(&["power", "--preset", "paper-eq25", "--p", "3/2"]).code, 2);
    assert_eq!(votepower(&["power", "--game", "/nonexistent/game.json"]).code, 2);
    assert_eq!(votepower(&["banzhaf", "100", "1", "2"]).code, 3);
    let many: Vec<String> = (1..=25).map(|w| w.to_string()).collect();
    let mut args = vec!["banzhaf", "30"];
    args.extend(many.iter().map(String::as_str));
    assert_eq!(votepower(&args).code, 4);
    assert_eq!(votepower(&["banzhaf", "30", "1", "2", "3", "--cap", "2"]).code, 4);
}

#[test]
fn bad_game_file_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        dir.path(),
        "bad.json",
        r#"{"quota": 6, "players": [
            {"name": "A", "structure": {"kind": "pmf", "entries": [[0, "1/2"], [1, "1/3"]]}}]}"#,
    );
    let run = votepower(&["power", "--game", &game]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("players[0]"), "{}", run.stderr);
}

#[test]
fn outputs_are_byte_identical() {
    let commands: [&[&str]; 4] = [
        &["power", "--preset", "senate-113"],
        &["sweep", "--preset", "paper-eq26", "--param", "B.p", "--from", "0", "--to", "1", "--steps", "11"],
        &["verify", "--preset", "paper-sec32", "--trials", "20000", "--seed", "3"],
        &["sensitivity", "--preset", "senate-113", "--LD", "0", "--LR", "1"],
    ];
    for args in commands {
        let first = votepower(args);
        let second = votepower(args);
        assert_eq!(first.code, 0, "{}", first.stderr);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn exported_presets_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for preset in votepower::Preset::names() {
        let path = dir.path().join(format!("{preset}.json"));
        let path = path.to_str().unwrap();
        assert_eq!(votepower(&["export", "--preset", preset, "--out", path]).code, 0);
        let from_preset = votepower(&["power", "--preset", preset, "--exact"]);
        let from_file = votepower(&["power", "--game", path, "--exact"]);
        assert_eq!(from_preset.code, from_file.code, "{preset}");
        assert_eq!(from_preset.stdout, from_file.stdout, "{preset}");
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let run = votepower(&[
        "series", "--preset", "paper-6-4321-random", "--player", "A", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("degree,pmf,influence\n0,0.5,"), "{text}");
}

#[test]
fn strict_influence_flag() {
    let dir = tempfile::tempdir().unwrap();
    let game = write_game(
        dir.path(),
        "big.json",
        r#"{"quota": 3, "players": [
            {"name": "big", "structure": {"kind": "random", "votes": 4}},
            {"name": "small", "structure": {"kind": "random", "votes": 1}}]}"#,
    );
    let extended = json_ok(&["power", "--game", &game]);
    assert_eq!(fractions(&extended, "power"), ["1", "0"]);
    let strict = votepower(&["power", "--game", &game, "--strict-influence"]);
    assert_eq!(strict.code, 3, "{}", strict.stdout);
}
