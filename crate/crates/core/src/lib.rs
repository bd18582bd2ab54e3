//! Core library for the VREN volleyball rally notation.
//!
//! - [`grid`]: the 26-zone court grid and zone-derived classifications.
//! - [`model`]: rallies, rounds, matches and structural validation.
//! - [`notation`]: the `.vren` text format, its linter and the JSON form.
//! - [`stats`]: set distributions, system splits and the attack table.
//! - [`features`]: fixed-width round and window encodings for the prediction tasks.
//! - [`predictor`]: logistic learners, metrics, per-round win probability and what-if.
//! - [`synth`]: a seeded synthetic match generator.
//! - [`rng`]: the deterministic random source behind the generator and the split.

pub mod diagnostic;
pub mod error;
pub mod features;
pub mod grid;
pub mod model;
pub mod notation;
pub mod predictor;
pub mod rng;
pub mod stats;
pub mod synth;

pub use diagnostic::{DiagCode, Diagnostic, Severity};
pub use error::{Result, VrenError};
pub use grid::ZoneId;
pub use model::{HitType, Level, Match, PassRating, Rally, Round, ServeType, SetLocation, SetSub, Team};
