#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use vren_core::features::FeatureMatrix;
use vren_core::grid::{pass_rating_for, ZoneId};
use vren_core::model::SetSub;
use vren_core::predictor::{LinearModel, ModelKind, SparseRows, TrainConfig};
use vren_core::rng::Rng;
use vren_core::{HitType, Level, Match, PassRating, Rally, Round, ServeType, SetLocation, Team};

pub fn zone() -> impl Strategy<Value = ZoneId> {
    (1u8..=26).prop_map(|z| ZoneId::new(z).unwrap())
}

fn opt_zone() -> impl Strategy<Value = Option<ZoneId>> {
    proptest::option::of(zone())
}

fn reason() -> impl Strategy<Value = String> {
    "[a-z0-9_]{1,12}"
}

fn label() -> impl Strategy<Value = String> {
    // Printable text including quotes, backslashes and non-ASCII.
    "[ -~éü\"\\\\\t]{0,16}"
}

/// A round whose fields are mutually consistent: pass rating follows the
/// pass target, overpasses propagate and touches imply blockers.
fn round_body(round_no: u32, team: Team) -> impl Strategy<Value = Round> {
    (
        proptest::sample::select(ServeType::ALL.to_vec()),
        zone(),
        (opt_zone(), opt_zone(), 0u8..4, opt_zone()),
        proptest::sample::select(SetLocation::ALL.to_vec()),
        any::<bool>(),
        opt_zone(),
        proptest::sample::select(HitType::ALL.to_vec()),
        opt_zone(),
        (0u8..=3, any::<bool>(), opt_zone()),
    )
        .prop_map(
            move |(serve, serve_from, (recv_from, recv_at, pass_kind, pass_to), set, sub, set_from, hit, hit_from, (blockers, touch, target))| {
                let mut r = Round::new(round_no, team);
                if round_no == 1 {
                    r.serve_type = Some(serve);
                    r.serve_from = Some(serve_from);
                }
                r.recv_move_from = recv_from;
                r.recv_at = recv_at;
                r.set_location = set;
                r.set_from = set_from;
                r.hit_type = hit;
                r.hit_from = hit_from;
                match pass_kind {
                    0 => {}
                    1 => {
                        r.pass_rating = Some(PassRating::Overpass);
                        r.set_location = SetLocation::Overpass;
                        r.hit_type = HitType::Overpass;
                    }
                    _ => {
                        r.pass_to = pass_to;
                        r.pass_rating = pass_to.map(|z| pass_rating_for(z, false));
                    }
                }
                if sub && r.set_location == SetLocation::Quick {
                    r.set_sub = Some(SetSub::ThirtyOne);
                }
                r.num_blockers = blockers;
                r.block_touch = touch && blockers > 0;
                r.target = target;
                r
            },
        )
}

fn rally(rally_no: u32) -> impl Strategy<Value = Rally> {
    (any::<bool>(), 1usize..7, any::<bool>(), reason(), reason())
        .prop_flat_map(move |(a_first, len, a_wins, win, lose)| {
            let first = if a_first { Team::A } else { Team::B };
            let rounds: Vec<_> = (0..len)
                .map(|i| {
                    let team = if i % 2 == 0 { first } else { first.other() };
                    round_body(i as u32 + 1, team)
                })
                .collect();
            (rounds, Just((a_wins, win, lose)))
        })
        .prop_map(move |(rounds, (a_wins, win, lose))| Rally {
            rally_no,
            winner: if a_wins { Team::A } else { Team::B },
            winning_reason: win,
            losing_reason: lose,
            rounds,
        })
}

/// Lint-clean matches with arbitrary (escapable) labels.
pub fn arb_match(max_rallies: usize) -> impl Strategy<Value = Match> {
    (
        label(),
        label(),
        label(),
        proptest::sample::select(Level::ALL.to_vec()),
        0..=max_rallies,
    )
        .prop_flat_map(|(id, a, b, level, n)| {
            let rallies: Vec<_> = (0..n).map(|i| rally(i as u32 + 1)).collect();
            (Just((id, a, b, level)), rallies)
        })
        .prop_map(|((id, a, b, level), rallies)| Match {
            match_id: id,
            team_a: a,
            team_b: b,
            level,
            rallies,
        })
}

/// Counts behind one attack-table row, tabulated without the library's
/// helpers.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct NaiveRow {
    pub sets: u64,
    pub attempts: u64,
    pub spikes: u64,
    pub junk: u64,
    pub line: u64,
    pub angle: u64,
    pub seam: u64,
}

fn naive_direction(set: SetLocation, b: u8) -> Option<usize> {
    let s1 = [1, 2, 6, 7];
    let s2 = [4, 5, 9, 10];
    let s3 = [3, 8];
    let s4 = [11, 12];
    let s5 = [14, 15];
    let has = |s: &[u8]| s.contains(&b);
    let (line, angle) = match set {
        SetLocation::Outside => (has(&s1), has(&s2) || has(&s5)),
        SetLocation::Quick | SetLocation::Bic => (has(&s1) || has(&s4), has(&s2) || has(&s5)),
        SetLocation::Oppo | SetLocation::DBall => (has(&s2), has(&s1) || has(&s4)),
        _ => return None,
    };
    if line {
        Some(0)
    } else if angle {
        Some(1)
    } else if has(&s3) {
        Some(2)
    } else {
        None
    }
}

/// Counts keyed by `(in_system, row label)`.
pub type NaiveTable = BTreeMap<(bool, &'static str), NaiveRow>;

/// Naive counts, plus rated set totals `(in, out)`.
pub fn naive_attack_counts(matches: &[Match], team: Team) -> (NaiveTable, (u64, u64)) {
    let mut rows = BTreeMap::new();
    let (mut rated_in, mut rated_out) = (0, 0);
    for m in matches {
        for rally in &m.rallies {
            for r in &rally.rounds {
                if r.team != team || r.set_location == SetLocation::None {
                    continue;
                }
                let inside = match r.pass_rating {
                    Some(PassRating::InSystem) => true,
                    Some(PassRating::OutOfSystem) => false,
                    _ => continue,
                };
                if inside {
                    rated_in += 1;
                } else {
                    rated_out += 1;
                }
                let label = match r.set_location {
                    SetLocation::Outside => "outside",
                    SetLocation::Bic => "bic",
                    SetLocation::Oppo => "oppo",
                    SetLocation::DBall => "d-ball",
                    SetLocation::Quick if r.set_sub == Some(SetSub::ThirtyOne) => "thirty_one",
                    SetLocation::Quick => "quick",
                    _ => continue,
                };
                let row: &mut NaiveRow = rows.entry((inside, label)).or_default();
                row.sets += 1;
                if r.hit_type != HitType::None && r.hit_type != HitType::Overpass {
                    row.attempts += 1;
                }
                if matches!(r.hit_type, HitType::RollShot | HitType::Tip | HitType::OffSpeed) {
                    row.junk += 1;
                }
                if r.hit_type == HitType::Hit {
                    row.spikes += 1;
                    if let Some(t) = r.target {
                        match naive_direction(r.set_location, t.get()) {
                            Some(0) => row.line += 1,
                            Some(1) => row.angle += 1,
                            Some(_) => row.seam += 1,
                            None => {}
                        }
                    }
                }
            }
        }
    }
    (rows, (rated_in, rated_out))
}

/// O(n^2) AUC: fraction of positive/negative pairs ordered correctly, ties half.
pub fn pairwise_auc(probs: &[f64], labels: &[u8]) -> Option<f64> {
    let mut num = 0.0;
    let mut pairs = 0u64;
    for (i, &pi) in probs.iter().enumerate() {
        if labels[i] != 1 {
            continue;
        }
        for (j, &pj) in probs.iter().enumerate() {
            if labels[j] != 0 {
                continue;
            }
            pairs += 1;
            if pi > pj {
                num += 1.0;
            } else if pi == pj {
                num += 0.5;
            }
        }
    }
    (pairs > 0).then(|| num / pairs as f64)
}

/// `n` rows of `d` features, about half zero, with every class present.
pub fn random_matrix(rng: &mut Rng, n: usize, d: usize, classes: usize) -> FeatureMatrix {
    let mut fm = FeatureMatrix::empty(0);
    fm.width = d;
    for i in 0..n {
        let x: Vec<f64> = (0..d)
            .map(|_| if rng.bernoulli(0.5) { 0.0 } else { rng.uniform(-1.0, 1.0) })
            .collect();
        // Cover every class at least once.
        let y = if i < classes { i } else { rng.below(classes) };
        fm.push(x, y, "g");
    }
    fm
}

/// Worst relative error between analytic and central-difference gradients.
pub fn gradient_error(model: &LinearModel, data: &SparseRows) -> f64 {
    let (_, grad) = model.loss_and_gradient(data);
    let params = model.params();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut probe = model.clone();
    for i in 0..params.len() {
        let mut p = params.clone();
        p[i] += h;
        probe.set_params(&p);
        let up = probe.loss_and_gradient(data).0;
        p[i] -= 2.0 * h;
        probe.set_params(&p);
        let down = probe.loss_and_gradient(data).0;
        let numeric = (up - down) / (2.0 * h);
        let err = (numeric - grad[i]).abs() / (numeric.abs() + grad[i].abs()).max(1e-8);
        worst = worst.max(err);
    }
    worst
}

pub fn random_model(rng: &mut Rng, kind: ModelKind, d: usize, classes: usize) -> LinearModel {
    let cfg = TrainConfig {
        l2: 0.01,
        ..TrainConfig::default()
    };
    let mut m = LinearModel::zeros(kind, d, classes, cfg);
    let p: Vec<f64> = m.params().iter().map(|_| rng.uniform(-1.0, 1.0)).collect();
    m.set_params(&p);
    m
}
