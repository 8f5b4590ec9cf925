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

//! The Senate cloture game: reproduced powers, sensitivities, and sampling
//! checks at degree-100 scale.

use std::time::Instant;

use votepower::rational::{ratio, to_f64};
use votepower::{
    generalized_banzhaf, influence, monte_carlo_influence, preset_game, sensitivity, Cohesion,
    ParamField, ParamRef, Preset, PresetOptions,
};

fn senate(ld: i64, lr: i64, cohesion: Cohesion) -> votepower::Game {
    preset_game(
        Preset::Senate,
        &PresetOptions {
            leader_dem: Some(ratio(ld, 1)),
            leader_rep: Some(ratio(lr, 1)),
            cohesion,
            ..Default::default()
        },
    )
    .unwrap()
}

fn decimals(r: &votepower::PowerReport) -> Vec<f64> {
    r.powers.iter().map(to_f64).collect()
}

#[test]
fn assigned_cohesion_reproduces_reference_powers() {
    let start = Instant::now();
    let dem_for = decimals(&generalized_banzhaf(&senate(1, 0, Cohesion::Assigned)).unwrap());
    let rep_for = decimals(&generalized_banzhaf(&senate(0, 1, Cohesion::Assigned)).unwrap());
    eprintln!("two evaluations took {:?}", start.elapsed());
    for (got, want) in dem_for.iter().zip([0.35, 0.35, 0.30]) {
        assert!((got - want).abs() <= 0.01, "{dem_for:?}");
    }
    for (got, want) in rep_for.iter().zip([0.41, 0.31, 0.28]) {
        assert!((got - want).abs() <= 0.01, "{rep_for:?}");
    }
}

#[test]
fn party_average_cohesion_does_not() {
    let dem_for = decimals(&generalized_banzhaf(&senate(1, 0, Cohesion::PartyAverages)).unwrap());
    assert!((dem_for[1] - 0.35).abs() > 0.1, "{dem_for:?}");
}

#[test]
fn sensitivities_at_the_cohesion_point() {
    let game = senate(1, 0, Cohesion::Assigned);
    let pd = ParamRef::new("Dem", ParamField::P);
    let pr = ParamRef::new("Rep", ParamField::P);
    let report = sensitivity(
        &game,
        &[pd.clone(), pr.clone()],
        &[ratio(84, 100), ratio(94, 100)],
        &ratio(1, 1000),
    )
    .unwrap();
    let d = |who: &str, p: &ParamRef| report.partial(who, p).unwrap();
    assert!((d("Dem", &pd) - 0.04).abs() < 0.05);
    assert!((d("Dem", &pr) + 0.36).abs() < 0.05);
    assert!((d("Rep", &pd) - 0.06).abs() < 0.05);
    assert!((d("Rep", &pr) + 0.37).abs() < 0.05);
}

#[test]
fn monte_carlo_brackets_the_exact_influence() {
    let game = senate(1, 0, Cohesion::Assigned);
    let exact = to_f64(&influence(&game, "Dem").unwrap());
    let est = monte_carlo_influence(&game, "Dem", 100_000, 113).unwrap();
    assert!(est.within(exact, 3.0), "{est:?} vs {exact}");
}
