//! Regression values for the shipped rally-winner model on the golden fixture
//! (rally 19, second round, set changed from d-ball to quick).

#![allow(dead_code)]

pub const GOLDEN_RALLY: u32 = 19;
pub const GOLDEN_ROUND_INDEX: usize = 1;
/// Bits of `p_after - p_before` (-0.0005208902019964157).
pub const GOLDEN_DELTA_BITS: u64 = 0xbf41_118b_30f1_e000;
