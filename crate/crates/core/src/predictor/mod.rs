//! Logistic baselines for the prediction tasks, their metrics, a seeded
//! match-level split, per-round win probability and what-if perturbation.

mod linear;
mod metrics;
mod split;
mod whatif;

pub use linear::{
    train_binary, train_binary_traced, train_multiclass, train_multiclass_traced, train_task, LinearModel,
    ModelKind, ModelMeta, SparseRows, TrainConfig,
};
pub use metrics::{argmax, auc, evaluate_binary, evaluate_categorical, EvalReport};
pub use split::{split_by_match, MatchSplit};
pub use whatif::{canonical_field, per_round_win_prob, rally_context, what_if, WhatIfResult};
