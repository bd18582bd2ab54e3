//! The `.vren` text format and its JSON counterpart.
//!
//! A document is a sequence of newline-delimited records. Blank lines and
//! lines starting with `#` are ignored.
//!
//! ```text
//! match "demo" teamA="Home" teamB="Away" level=professional
//! rally 1 winner=A win=kill lose=dig_error
//! round 1 team=A serve=jump serve_from=19 recv_from=9 recv_at=9 pass=in pass_to=13 set=dball set_from=13 hit=hit hit_from=6 blockers=2 touch=n target=8
//! ```
//!
//! Parsing stops at grammar errors (bad syntax, zones outside 1-26, unknown
//! enumeration values, duplicate fields, no header). Model-level rules such
//! as round numbering or pass-rating consistency are reported by
//! [`lint_match`] instead, so a document with those problems still parses.

mod json;
mod lint;
mod parse;
mod write;

pub use json::{corpus_from_json, corpus_to_json, match_from_json, match_to_json};
pub use lint::{lint_match, lint_source};
pub use parse::{
    parse_corpus, parse_corpus_with_map, parse_match, parse_match_with_map, ParsedMatch, SourceMap,
};
pub(crate) use parse::{parse_round_value, ROUND_KEYS};
pub use write::{serialize_corpus, serialize_match};
pub(crate) use write::round_value;
