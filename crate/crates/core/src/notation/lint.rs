use crate::diagnostic::{DiagCode, Diagnostic};
use crate::error::VrenError;
use crate::model::{validate_rally, Match};
use crate::notation::parse::parse_corpus_with_map;

/// Every rally's structural diagnostics plus match-level numbering checks.
pub fn lint_match(m: &Match) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, rally) in m.rallies.iter().enumerate() {
        let expected = idx as u32 + 1;
        if rally.rally_no != expected {
            out.push(
                Diagnostic::new(
                    DiagCode::RallySequence,
                    format!("expected rally {expected}, found {}", rally.rally_no),
                )
                .in_rally(rally.rally_no),
            );
        }
        out.extend(validate_rally(rally));
    }
    out
}

/// Lint a source document: grammar errors if it does not parse, otherwise
/// the lint diagnostics of every match mapped back to source lines.
pub fn lint_source(source: &str) -> Vec<Diagnostic> {
    match parse_corpus_with_map(source) {
        Err(VrenError::Parse(diags)) => diags,
        Err(other) => vec![Diagnostic::new(DiagCode::Syntax, other.to_string())],
        Ok(parsed) => parsed
            .iter()
            .flat_map(|p| {
                lint_match(&p.value)
                    .into_iter()
                    .map(|d| p.source_map.locate(&p.value, d))
            })
            .collect(),
    }
}
