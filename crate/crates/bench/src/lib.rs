//! Shared inputs for the benchmarks.

use vren_core::synth::{generate_corpus, GeneratorProfile};
use vren_core::Match;

/// A deterministic synthetic corpus of `matches` x `rallies`.
pub fn corpus(matches: usize, rallies: usize) -> Vec<Match> {
    generate_corpus(&GeneratorProfile::default(), matches, rallies, 0xbe7c).expect("default profile is valid")
}
