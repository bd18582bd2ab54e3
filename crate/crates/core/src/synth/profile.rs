use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};

/// Set-location mix over the six labels an attacking round can set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetMix {
    pub outside: f64,
    pub dball: f64,
    pub oppo: f64,
    pub quick: f64,
    pub bic: f64,
    pub dump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServeMix {
    pub jump: f64,
    pub float: f64,
    pub hybrid: f64,
}

/// Hit-type families: spikes, blocked attacks, off-speed shots (roll shot,
/// tip, off-speed and dumps) and free balls or overpasses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HitMix {
    pub hit: f64,
    pub blocked: f64,
    pub junk: f64,
    pub free: f64,
}

/// Relative reception weights for zones 1 to 15, one list per serve type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiveWeights {
    pub jump: Vec<f64>,
    pub float: Vec<f64>,
    pub hybrid: Vec<f64>,
}

/// Per-event rates. Together with `max_rounds` these shape rally length:
/// each attacking round ends the rally with the termination chance of its
/// hit family, and a rally is cut at `max_rounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rates {
    pub service_error: f64,
    pub ace: f64,
    pub overpass_pass: f64,
    pub in_system_pass: f64,
    pub thirty_one_of_quick: f64,
    pub spike_kill: f64,
    pub spike_error: f64,
    pub block_point: f64,
    pub junk_kill: f64,
    pub max_rounds: u32,
    /// Scales how much the set location shifts the spike kill rate
    /// (quick and bic up, d-ball down). Zero disables the effect.
    pub signal_strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorProfile {
    pub set_location: SetMix,
    pub serve_type: ServeMix,
    pub hit_family: HitMix,
    pub receive_weights: ReceiveWeights,
    pub rates: Rates,
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        Self {
            set_location: SetMix {
                outside: 0.427,
                dball: 0.063,
                oppo: 0.205,
                quick: 0.205,
                bic: 0.08,
                dump: 0.02,
            },
            serve_type: ServeMix {
                jump: 0.771,
                float: 0.179,
                hybrid: 0.05,
            },
            hit_family: HitMix {
                hit: 0.598,
                blocked: 0.158,
                junk: 0.172,
                free: 0.072,
            },
            receive_weights: ReceiveWeights {
                //          1    2    3    4    5    6    7    8    9   10   11   12   13   14   15
                jump: vec![2.0, 6.0, 6.0, 6.0, 2.0, 0.5, 1.5, 1.5, 1.5, 0.5, 0.2, 0.2, 0.2, 0.2, 0.2],
                float: vec![0.5, 1.5, 1.5, 1.5, 0.5, 2.0, 6.0, 6.0, 6.0, 2.0, 0.3, 0.5, 0.5, 0.5, 0.3],
                hybrid: vec![1.0, 3.0, 3.0, 3.0, 1.0, 1.0, 3.0, 3.0, 3.0, 1.0, 0.3, 0.3, 0.3, 0.3, 0.3],
            },
            rates: Rates {
                service_error: 0.07,
                ace: 0.06,
                overpass_pass: 0.02,
                in_system_pass: 0.7,
                thirty_one_of_quick: 0.3,
                spike_kill: 0.4,
                spike_error: 0.1,
                block_point: 0.45,
                junk_kill: 0.1,
                max_rounds: 12,
                signal_strength: 0.0,
            },
        }
    }
}

fn family(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(VrenError::BadProfile(format!("{name} has a negative or non-finite probability")));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(VrenError::BadProfile(format!("{name} sums to {sum}, expected 1")));
    }
    Ok(())
}

fn weights(name: &str, values: &[f64]) -> Result<()> {
    if values.len() != 15 {
        return Err(VrenError::BadProfile(format!("{name} needs 15 zone weights, found {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) || values.iter().sum::<f64>() <= 0.0 {
        return Err(VrenError::BadProfile(format!("{name} weights must be non-negative with a positive sum")));
    }
    Ok(())
}

impl GeneratorProfile {
    pub fn validate(&self) -> Result<()> {
        let s = &self.set_location;
        family("set_location", &[s.outside, s.dball, s.oppo, s.quick, s.bic, s.dump])?;
        let v = &self.serve_type;
        family("serve_type", &[v.jump, v.float, v.hybrid])?;
        let h = &self.hit_family;
        family("hit_family", &[h.hit, h.blocked, h.junk, h.free])?;
        let w = &self.receive_weights;
        weights("receive_weights.jump", &w.jump)?;
        weights("receive_weights.float", &w.float)?;
        weights("receive_weights.hybrid", &w.hybrid)?;

        let r = &self.rates;
        for (name, p) in [
            ("service_error", r.service_error),
            ("ace", r.ace),
            ("overpass_pass", r.overpass_pass),
            ("in_system_pass", r.in_system_pass),
            ("thirty_one_of_quick", r.thirty_one_of_quick),
            ("spike_kill", r.spike_kill),
            ("spike_error", r.spike_error),
            ("block_point", r.block_point),
            ("junk_kill", r.junk_kill),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(VrenError::BadProfile(format!("rates.{name} = {p} is not a probability")));
            }
        }
        if r.service_error + r.ace > 1.0 || r.spike_kill + r.spike_error > 1.0 {
            return Err(VrenError::BadProfile("outcome rates of one event exceed 1".into()));
        }
        if !(1..=64).contains(&r.max_rounds) {
            return Err(VrenError::BadProfile(format!("rates.max_rounds = {} is outside 1..=64", r.max_rounds)));
        }
        if !r.signal_strength.is_finite() || r.signal_strength < 0.0 {
            return Err(VrenError::BadProfile("rates.signal_strength must be finite and non-negative".into()));
        }
        // The dump share is carved out of the off-speed family and overpass
        // passes out of the free family; both must fit.
        let attack = 1.0 - r.overpass_pass;
        if s.dump * attack > h.junk + 1e-12 || r.overpass_pass > h.free + 1e-12 {
            return Err(VrenError::BadProfile(
                "hit_family.junk must cover dump sets and hit_family.free must cover overpass passes".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| VrenError::BadProfile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| VrenError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("profiles serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let p = GeneratorProfile::default();
        p.validate().unwrap();
        assert_eq!(GeneratorProfile::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn non_normalized_family_is_rejected() {
        let mut p = GeneratorProfile::default();
        p.serve_type.jump = 0.8;
        assert_eq!(p.validate().unwrap_err().code(), "E_BAD_PROFILE");
    }

    #[test]
    fn negative_probability_is_rejected() {
        let mut p = GeneratorProfile::default();
        p.hit_family.hit = 0.7;
        p.hit_family.free = -0.028;
        assert_eq!(p.validate().unwrap_err().code(), "E_BAD_PROFILE");
    }

    #[test]
    fn unknown_json_field_is_rejected() {
        let text = GeneratorProfile::default().to_json().replacen('{', "{\"extra\": 1,", 1);
        assert_eq!(GeneratorProfile::from_json(&text).unwrap_err().code(), "E_BAD_PROFILE");
    }
}
