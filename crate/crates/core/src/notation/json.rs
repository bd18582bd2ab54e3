use crate::error::{Result, VrenError};
use crate::model::Match;

/// Pretty-printed JSON form of a match. Zones are integers, enumerations use
/// the same lowercase tokens as the text grammar and absent optional fields
/// are omitted.
pub fn match_to_json(m: &Match) -> String {
    serde_json::to_string_pretty(m).expect("match values always serialize")
}

/// Strict inverse of [`match_to_json`]: unknown fields, missing required
/// fields and type mismatches are all `E_SCHEMA`.
pub fn match_from_json(doc: &str) -> Result<Match> {
    serde_json::from_str(doc).map_err(|e| VrenError::Schema(e.to_string()))
}

pub fn corpus_to_json(matches: &[Match]) -> String {
    serde_json::to_string_pretty(matches).expect("match values always serialize")
}

pub fn corpus_from_json(doc: &str) -> Result<Vec<Match>> {
    serde_json::from_str(doc).map_err(|e| VrenError::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse::parse_match;

    const SRC: &str = "match \"m\" teamA=\"X\" teamB=\"Y\"\n\
        rally 1 winner=A win=kill lose=dig_error\n\
        round 1 team=A serve=jump serve_from=19 recv_at=3 pass=in pass_to=12 set=quick set_sub=thirty_one set_from=12 hit=hit hit_from=14 blockers=1 touch=y target=1\n";

    #[test]
    fn round_trip() {
        let m = parse_match(SRC).unwrap();
        let json = match_to_json(&m);
        assert_eq!(match_from_json(&json).unwrap(), m);
    }

    #[test]
    fn missing_winner_is_schema_error() {
        let m = parse_match(SRC).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&match_to_json(&m)).unwrap();
        v["rallies"][0].as_object_mut().unwrap().remove("winner");
        let err = match_from_json(&v.to_string()).unwrap_err();
        assert_eq!(err.code(), "E_SCHEMA");
    }

    #[test]
    fn zone_as_text_is_rejected() {
        let m = parse_match(SRC).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&match_to_json(&m)).unwrap();
        v["rallies"][0]["rounds"][0]["pass_to"] = serde_json::json!("12");
        assert_eq!(match_from_json(&v.to_string()).unwrap_err().code(), "E_SCHEMA");
    }

    #[test]
    fn unknown_field_and_bad_zone_are_rejected() {
        let m = parse_match(SRC).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&match_to_json(&m)).unwrap();
        v["rallies"][0]["rounds"][0]["speed"] = serde_json::json!(3);
        assert_eq!(match_from_json(&v.to_string()).unwrap_err().code(), "E_SCHEMA");

        let mut v: serde_json::Value = serde_json::from_str(&match_to_json(&m)).unwrap();
        v["rallies"][0]["rounds"][0]["target"] = serde_json::json!(27);
        assert_eq!(match_from_json(&v.to_string()).unwrap_err().code(), "E_SCHEMA");
    }
}
