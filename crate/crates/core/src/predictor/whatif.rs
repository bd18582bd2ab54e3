use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::features::{rally_windows, FeatureLayout, MaskKind, WindowOptions};
use crate::grid::pass_rating_for;
use crate::model::{validate_rally, Match, PassRating, Rally, Round};
use crate::notation::{parse_round_value, round_value, ROUND_KEYS};

use super::linear::{LinearModel, ModelKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfResult {
    pub rally_no: u32,
    pub round_index: usize,
    pub changed_field: String,
    pub old_value: String,
    pub new_value: String,
    pub p_before: f64,
    pub p_after: f64,
    pub delta: f64,
}

/// Rounds of every rally before `rally_index`, the history a window may see.
pub fn rally_context(m: &Match, rally_index: usize) -> Vec<Round> {
    m.rallies[..rally_index.min(m.rallies.len())]
        .iter()
        .flat_map(|r| r.rounds.iter().cloned())
        .collect()
}

fn window_settings(model: &LinearModel) -> Result<(WindowOptions, MaskKind)> {
    if model.kind != ModelKind::Binary {
        return Err(VrenError::InvalidModel("win probability needs a rally-winner (binary) model".into()));
    }
    if let Some(meta) = model.meta {
        return Ok((meta.options(), meta.mask));
    }
    // Models trained on raw matrices carry no window settings; infer k.
    let width = FeatureLayout::get().width;
    if model.n_features == 0 || !model.n_features.is_multiple_of(width) {
        return Err(VrenError::DimMismatch {
            expected: width,
            actual: model.n_features,
        });
    }
    Ok((WindowOptions::new(model.n_features / width - 1), MaskKind::NoMask))
}

/// Probability that team A wins the rally, from the window ending at each
/// round in turn.
pub fn per_round_win_prob(model: &LinearModel, context: &[Round], rally: &Rally) -> Result<Vec<f64>> {
    let (opts, mask) = window_settings(model)?;
    rally_windows(context, &rally.rounds, opts, mask)
        .iter()
        .map(|x| model.predict_binary(x))
        .collect()
}

fn final_prob(model: &LinearModel, context: &[Round], rally: &Rally) -> Result<f64> {
    let probs = per_round_win_prob(model, context, rally)?;
    probs
        .last()
        .copied()
        .ok_or_else(|| VrenError::BadIndex(format!("rally {} has no rounds", rally.rally_no)))
}

/// Round keys as written in `.vren`, also accepting the long field names.
pub fn canonical_field(field: &str) -> Option<&'static str> {
    let key = match field {
        "serve_type" => "serve",
        "recv_move_from" => "recv_from",
        "pass_rating" => "pass",
        "set_location" => "set",
        "hit_type" => "hit",
        "num_blockers" => "blockers",
        "block_touch" => "touch",
        other => other,
    };
    ROUND_KEYS.iter().copied().find(|k| *k == key)
}

/// Change one field of one round and report how the final-round win
/// probability moves.
pub fn what_if(
    model: &LinearModel,
    context: &[Round],
    rally: &Rally,
    round_index: usize,
    field: &str,
    new_value: &str,
) -> Result<WhatIfResult> {
    if round_index >= rally.rounds.len() {
        return Err(VrenError::BadIndex(format!(
            "round index {round_index} is out of range for rally {} with {} rounds",
            rally.rally_no,
            rally.rounds.len()
        )));
    }
    let key = canonical_field(field)
        .ok_or_else(|| VrenError::InvalidPerturbation(format!("`{field}` is not a round field")))?;
    let original = &rally.rounds[round_index];
    let old_value = round_value(original, key).unwrap_or_else(|| "-".into());

    let mut changed = rally.clone();
    let round = &mut changed.rounds[round_index];
    parse_round_value(round, key, new_value).map_err(|d| VrenError::InvalidPerturbation(d.message))?;
    if key == "pass_to" && round.pass_rating != Some(PassRating::Overpass) {
        if let Some(to) = round.pass_to {
            round.pass_rating = Some(pass_rating_for(to, false));
        }
    }

    let before: Vec<_> = validate_rally(rally).into_iter().filter(|d| d.is_error()).collect();
    if let Some(d) = validate_rally(&changed)
        .into_iter()
        .find(|d| d.is_error() && !before.iter().any(|b| b.code == d.code && b.round_no == d.round_no))
    {
        return Err(VrenError::InvalidPerturbation(d.to_string()));
    }

    let p_before = final_prob(model, context, rally)?;
    let p_after = final_prob(model, context, &changed)?;
    Ok(WhatIfResult {
        rally_no: rally.rally_no,
        round_index,
        changed_field: key.to_string(),
        old_value,
        new_value: new_value.to_string(),
        p_before,
        p_after,
        delta: p_after - p_before,
    })
}
