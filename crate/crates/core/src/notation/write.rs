use std::fmt::Write as _;

use crate::error::{Result, VrenError};
use crate::model::{Match, Round};
use crate::notation::lint::lint_match;
use crate::notation::parse::{is_reason_token, ROUND_KEYS};

/// Canonical text for one match.
///
/// Fields appear in possession order, optional fields are omitted when
/// absent and `set`, `hit`, `blockers` and `touch` are always written.
/// Refuses matches that carry error-severity lint diagnostics.
pub fn serialize_match(m: &Match) -> Result<String> {
    check_serializable(m)?;
    let mut out = String::new();
    write_match(&mut out, m);
    Ok(out)
}

/// Canonical text for several matches, back to back.
pub fn serialize_corpus(matches: &[Match]) -> Result<String> {
    let mut out = String::new();
    for m in matches {
        check_serializable(m)?;
        write_match(&mut out, m);
    }
    Ok(out)
}

fn check_serializable(m: &Match) -> Result<()> {
    let diags = lint_match(m);
    if let Some(first) = diags.iter().find(|d| d.is_error()) {
        return Err(VrenError::InvalidModel(first.to_string()));
    }
    for rally in &m.rallies {
        for reason in [&rally.winning_reason, &rally.losing_reason] {
            if !is_reason_token(reason) {
                return Err(VrenError::InvalidModel(format!(
                    "rally {}: reason `{reason}` is not a [a-z0-9_] token",
                    rally.rally_no
                )));
            }
        }
    }
    Ok(())
}

fn write_match(out: &mut String, m: &Match) {
    writeln!(
        out,
        "match {} teamA={} teamB={} level={}",
        quote(&m.match_id),
        quote(&m.team_a),
        quote(&m.team_b),
        m.level
    )
    .unwrap();
    for rally in &m.rallies {
        writeln!(
            out,
            "rally {} winner={} win={} lose={}",
            rally.rally_no, rally.winner, rally.winning_reason, rally.losing_reason
        )
        .unwrap();
        for round in &rally.rounds {
            write_round(out, round);
        }
    }
}

fn write_round(out: &mut String, r: &Round) {
    write!(out, "round {} team={}", r.round_no, r.team).unwrap();
    for key in &ROUND_KEYS[1..] {
        if let Some(v) = round_value(r, key) {
            write!(out, " {key}={v}").unwrap();
        }
    }
    out.push('\n');
}

/// Text token for one round field, `None` when an optional field is absent.
pub(crate) fn round_value(r: &Round, key: &str) -> Option<String> {
    fn s<T: ToString>(v: Option<T>) -> Option<String> {
        v.map(|v| v.to_string())
    }
    match key {
        "team" => s(Some(r.team)),
        "serve" => s(r.serve_type),
        "serve_from" => s(r.serve_from),
        "recv_from" => s(r.recv_move_from),
        "recv_at" => s(r.recv_at),
        "pass" => s(r.pass_rating),
        "pass_to" => s(r.pass_to),
        "set" => s(Some(r.set_location)),
        "set_sub" => s(r.set_sub),
        "set_from" => s(r.set_from),
        "hit" => s(Some(r.hit_type)),
        "hit_from" => s(r.hit_from),
        "blockers" => s(Some(r.num_blockers)),
        "touch" => Some(if r.block_touch { "y" } else { "n" }.to_string()),
        "target" => s(r.target),
        _ => None,
    }
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            '\t' => q.push_str("\\t"),
            c => q.push(c),
        }
    }
    q.push('"');
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Team;
    use crate::notation::parse::parse_match;

    #[test]
    fn empty_match_is_header_only() {
        let m = Match::new("empty", "X", "Y");
        assert_eq!(
            serialize_match(&m).unwrap(),
            "match \"empty\" teamA=\"X\" teamB=\"Y\" level=professional\n"
        );
    }

    #[test]
    fn canonical_form_is_stable() {
        let src = "match \"m\" teamA=\"X\" teamB=\"Y\"\n\
            rally 1 winner=B win=ace lose=reception_error\n\
            round 1 target=4 recv_at=3 serve_from=19 serve=float team=A\n";
        let m = parse_match(src).unwrap();
        let text = serialize_match(&m).unwrap();
        assert_eq!(
            text,
            "match \"m\" teamA=\"X\" teamB=\"Y\" level=professional\n\
             rally 1 winner=B win=ace lose=reception_error\n\
             round 1 team=A serve=float serve_from=19 recv_at=3 set=none hit=none blockers=0 touch=n target=4\n"
        );
        assert_eq!(serialize_match(&parse_match(&text).unwrap()).unwrap(), text);
        assert_eq!(serialize_match(&m).unwrap(), text);
    }

    #[test]
    fn refuses_invalid_model() {
        let src = "match \"m\" teamA=\"X\" teamB=\"Y\"\n\
            rally 1 winner=A win=kill lose=dig_error\n\
            round 1 team=A serve=jump serve_from=19\n\
            round 2 team=A\n";
        let m = parse_match(src).unwrap();
        let err = serialize_match(&m).unwrap_err();
        assert_eq!(err.code(), "E_INVALID_MODEL");
    }

    #[test]
    fn refuses_bad_reason_token() {
        let mut m = Match::new("m", "X", "Y");
        let mut round = crate::model::Round::new(1, Team::A);
        round.serve_type = Some(crate::model::ServeType::Jump);
        round.serve_from = Some(crate::grid::ZoneId::new(19).unwrap());
        m.rallies.push(crate::model::Rally {
            rally_no: 1,
            winner: Team::A,
            winning_reason: "Big Kill".into(),
            losing_reason: "dig_error".into(),
            rounds: vec![round],
        });
        assert_eq!(serialize_match(&m).unwrap_err().code(), "E_INVALID_MODEL");
    }

    #[test]
    fn quoting_round_trips() {
        let m = Match::new("a \"quoted\"\tid\\with\nnewline", "Ünïcode", "B");
        let text = serialize_match(&m).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(parse_match(&text).unwrap(), m);
    }
}
