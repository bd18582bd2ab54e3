//! Diagnostics shared by the parser, the structural validator and the linter.
//!
//! Every diagnostic carries a code from a closed list. Codes prefixed `E_` are
//! emitted with [`Severity::Error`] and codes prefixed `W_` with
//! [`Severity::Warning`]; a document with no error-severity diagnostics is
//! lint-clean.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiagCode {
    // Grammar.
    #[serde(rename = "E_SYNTAX")]
    Syntax,
    #[serde(rename = "E_ZONE_RANGE")]
    ZoneRange,
    #[serde(rename = "E_ENUM_VALUE")]
    EnumValue,
    #[serde(rename = "E_DUPLICATE_FIELD")]
    DuplicateField,
    #[serde(rename = "E_MISSING_HEADER")]
    MissingHeader,
    // Rally structure.
    #[serde(rename = "E_EMPTY_RALLY")]
    EmptyRally,
    #[serde(rename = "E_ROUND_GAP")]
    RoundGap,
    #[serde(rename = "E_TEAM_ALTERNATION")]
    TeamAlternation,
    #[serde(rename = "W_TEAM_REPEAT_AFTER_TOUCH")]
    TeamRepeatAfterTouch,
    #[serde(rename = "E_RALLY_SEQUENCE")]
    RallySequence,
    // Round fields.
    #[serde(rename = "E_SERVE_NOT_ROUND1")]
    ServeNotRound1,
    #[serde(rename = "W_SERVE_INCOMPLETE")]
    ServeIncomplete,
    #[serde(rename = "E_OVERPASS_PROPAGATION")]
    OverpassPropagation,
    #[serde(rename = "W_PASS_RATING_MISMATCH")]
    PassRatingMismatch,
    #[serde(rename = "E_BLOCKERS_RANGE")]
    BlockersRange,
    #[serde(rename = "E_TOUCH_WITHOUT_BLOCKER")]
    TouchWithoutBlocker,
}

impl DiagCode {
    pub const ALL: [DiagCode; 16] = [
        DiagCode::Syntax,
        DiagCode::ZoneRange,
        DiagCode::EnumValue,
        DiagCode::DuplicateField,
        DiagCode::MissingHeader,
        DiagCode::EmptyRally,
        DiagCode::RoundGap,
        DiagCode::TeamAlternation,
        DiagCode::TeamRepeatAfterTouch,
        DiagCode::RallySequence,
        DiagCode::ServeNotRound1,
        DiagCode::ServeIncomplete,
        DiagCode::OverpassPropagation,
        DiagCode::PassRatingMismatch,
        DiagCode::BlockersRange,
        DiagCode::TouchWithoutBlocker,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Syntax => "E_SYNTAX",
            DiagCode::ZoneRange => "E_ZONE_RANGE",
            DiagCode::EnumValue => "E_ENUM_VALUE",
            DiagCode::DuplicateField => "E_DUPLICATE_FIELD",
            DiagCode::MissingHeader => "E_MISSING_HEADER",
            DiagCode::EmptyRally => "E_EMPTY_RALLY",
            DiagCode::RoundGap => "E_ROUND_GAP",
            DiagCode::TeamAlternation => "E_TEAM_ALTERNATION",
            DiagCode::TeamRepeatAfterTouch => "W_TEAM_REPEAT_AFTER_TOUCH",
            DiagCode::RallySequence => "E_RALLY_SEQUENCE",
            DiagCode::ServeNotRound1 => "E_SERVE_NOT_ROUND1",
            DiagCode::ServeIncomplete => "W_SERVE_INCOMPLETE",
            DiagCode::OverpassPropagation => "E_OVERPASS_PROPAGATION",
            DiagCode::PassRatingMismatch => "W_PASS_RATING_MISMATCH",
            DiagCode::BlockersRange => "E_BLOCKERS_RANGE",
            DiagCode::TouchWithoutBlocker => "E_TOUCH_WITHOUT_BLOCKER",
        }
    }

    pub fn severity(self) -> Severity {
        if self.as_str().starts_with("W_") {
            Severity::Warning
        } else {
            Severity::Error
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub severity: Severity,
    /// 1-based source line, when the diagnostic came from (or was mapped back to) text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rally_no: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_no: Option<u32>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Self {
            code,
            severity: code.severity(),
            line: None,
            rally_no: None,
            round_no: None,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn in_rally(mut self, rally_no: u32) -> Self {
        self.rally_no = Some(rally_no);
        self
    }

    pub fn in_round(mut self, round_no: u32) -> Self {
        self.round_no = Some(round_no);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "{}[{}]", self.severity, self.code)?;
        match (self.rally_no, self.round_no) {
            (Some(rally), Some(round)) => write!(f, " rally {rally} round {round}")?,
            (Some(rally), None) => write!(f, " rally {rally}")?,
            _ => {}
        }
        write!(f, ": {}", self.message)
    }
}

/// True when none of the diagnostics is error-severity.
pub fn is_clean(diags: &[Diagnostic]) -> bool {
    !diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn severity_follows_prefix() {
        for code in DiagCode::ALL {
            let expected = if code.as_str().starts_with('W') {
                Severity::Warning
            } else {
                Severity::Error
            };
            assert_eq!(code.severity(), expected, "{code}");
        }
    }

    #[test]
    fn serde_name_matches_as_str() {
        for code in DiagCode::ALL {
            let json = serde_json::to_string(&code).unwrap();
            assert_eq!(json, format!("\"{}\"", code.as_str()));
        }
    }

    #[test]
    fn display_includes_location() {
        let d = Diagnostic::new(DiagCode::RoundGap, "expected round 2, found 3")
            .at_line(7)
            .in_rally(1)
            .in_round(3);
        assert_eq!(
            d.to_string(),
            "line 7: error[E_ROUND_GAP] rally 1 round 3: expected round 2, found 3"
        );
    }
}
