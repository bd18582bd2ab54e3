use std::collections::HashSet;

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::error::{Result, VrenError};
use crate::grid::ZoneId;
use crate::model::{HitType, Level, Match, PassRating, Rally, Round, ServeType, SetLocation, SetSub, Team};

/// Line numbers of the records a match was parsed from, indexed by position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub header_line: usize,
    pub rally_lines: Vec<usize>,
    pub round_lines: Vec<Vec<usize>>,
}

impl SourceMap {
    /// Attach a line number to a diagnostic that names a rally (and maybe a round).
    pub fn locate(&self, m: &Match, mut diag: Diagnostic) -> Diagnostic {
        if diag.line.is_some() {
            return diag;
        }
        let Some(rally_no) = diag.rally_no else {
            diag.line = Some(self.header_line);
            return diag;
        };
        let Some(ri) = m.rallies.iter().position(|r| r.rally_no == rally_no) else {
            return diag;
        };
        let line = diag
            .round_no
            .and_then(|round_no| m.rallies[ri].rounds.iter().position(|r| r.round_no == round_no))
            .and_then(|pos| self.round_lines.get(ri).and_then(|lines| lines.get(pos)))
            .or_else(|| self.rally_lines.get(ri));
        diag.line = line.copied();
        diag
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedMatch {
    pub value: Match,
    pub source_map: SourceMap,
}

/// Parse a document holding exactly one match.
pub fn parse_match(source: &str) -> Result<Match> {
    parse_match_with_map(source).map(|p| p.value)
}

pub fn parse_match_with_map(source: &str) -> Result<ParsedMatch> {
    let mut parsed = parse_corpus_with_map(source)?;
    match parsed.len() {
        1 => Ok(parsed.remove(0)),
        n => {
            let line = parsed.get(1).map(|p| p.source_map.header_line).unwrap_or(1);
            Err(VrenError::Parse(vec![Diagnostic::new(
                DiagCode::Syntax,
                format!("expected a single match header, found {n}"),
            )
            .at_line(line)]))
        }
    }
}

/// Parse a document holding one or more matches, each introduced by a header.
pub fn parse_corpus(source: &str) -> Result<Vec<Match>> {
    Ok(parse_corpus_with_map(source)?.into_iter().map(|p| p.value).collect())
}

pub fn parse_corpus_with_map(source: &str) -> Result<Vec<ParsedMatch>> {
    let mut parser = Parser::default();
    for (idx, raw) in source.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Err(diag) = parser.line(line, line_no) {
            parser.errors.push(diag.at_line(line_no));
        }
    }
    if parser.matches.is_empty() && parser.errors.is_empty() {
        parser.errors.push(
            Diagnostic::new(DiagCode::MissingHeader, "document has no match header").at_line(1),
        );
    }
    if parser.errors.is_empty() {
        Ok(parser.matches)
    } else {
        Err(VrenError::Parse(parser.errors))
    }
}

#[derive(Default)]
struct Parser {
    matches: Vec<ParsedMatch>,
    errors: Vec<Diagnostic>,
}

type LineResult<T> = std::result::Result<T, Diagnostic>;

impl Parser {
    fn line(&mut self, line: &str, line_no: usize) -> LineResult<()> {
        let tokens = tokenize(line)?;
        let (keyword, rest) = tokens.split_first().expect("non-empty line has a token");
        match keyword.as_bare() {
            Some("match") => self.header(rest, line_no),
            Some("rally") => self.rally(rest, line_no),
            Some("round") => self.round(rest, line_no),
            _ => Err(syntax(format!(
                "expected `match`, `rally` or `round`, found `{}`",
                keyword.text()
            ))),
        }
    }

    fn header(&mut self, rest: &[Token], line_no: usize) -> LineResult<()> {
        let (id, fields) = match rest.split_first() {
            Some((Token::Quoted(id), fields)) => (id.clone(), fields),
            _ => return Err(syntax("match header needs a quoted id: match \"<id>\" ...")),
        };
        let mut fields = Fields::new(fields)?;
        let team_a = fields.required_quoted("teamA")?;
        let team_b = fields.required_quoted("teamB")?;
        let level = match fields.take("level") {
            Some(v) => enum_value::<Level>("level", &v, Level::from_token, Level::expected)?,
            None => Level::Professional,
        };
        fields.finish()?;
        let mut m = Match::new(id, team_a, team_b);
        m.level = level;
        self.matches.push(ParsedMatch {
            value: m,
            source_map: SourceMap {
                header_line: line_no,
                ..SourceMap::default()
            },
        });
        Ok(())
    }

    fn current(&mut self, what: &str) -> LineResult<&mut ParsedMatch> {
        self.matches.last_mut().ok_or_else(|| {
            Diagnostic::new(DiagCode::MissingHeader, format!("{what} before any match header"))
        })
    }

    fn rally(&mut self, rest: &[Token], line_no: usize) -> LineResult<()> {
        let (number, fields) = leading_number(rest, "rally")?;
        let mut fields = Fields::new(fields)?;
        let winner = fields.required("winner")?;
        let winner = enum_value::<Team>("winner", &winner, Team::from_token, Team::expected)?;
        let winning_reason = reason(fields.required("win")?)?;
        let losing_reason = reason(fields.required("lose")?)?;
        fields.finish()?;

        let parsed = self.current("rally")?;
        parsed.value.rallies.push(Rally {
            rally_no: number,
            winner,
            winning_reason,
            losing_reason,
            rounds: Vec::new(),
        });
        parsed.source_map.rally_lines.push(line_no);
        parsed.source_map.round_lines.push(Vec::new());
        Ok(())
    }

    fn round(&mut self, rest: &[Token], line_no: usize) -> LineResult<()> {
        let (number, fields) = leading_number(rest, "round")?;
        let round = parse_round_fields(number, fields)?;

        let parsed = self.current("round")?;
        let rally = parsed
            .value
            .rallies
            .last_mut()
            .ok_or_else(|| syntax("round before any rally record"))?;
        rally.rounds.push(round);
        parsed
            .source_map
            .round_lines
            .last_mut()
            .expect("rally lines track rallies")
            .push(line_no);
        Ok(())
    }
}

fn parse_round_fields(number: u32, tokens: &[Token]) -> LineResult<Round> {
    let mut f = Fields::new(tokens)?;
    let team = f.required("team")?;
    let mut round = Round::new(number, enum_value("team", &team, Team::from_token, Team::expected)?);

    round.serve_type = f.opt_enum("serve", ServeType::from_token, ServeType::expected)?;
    round.serve_from = f.opt_zone("serve_from")?;
    round.recv_move_from = f.opt_zone("recv_from")?;
    round.recv_at = f.opt_zone("recv_at")?;
    round.pass_rating = f.opt_enum("pass", PassRating::from_token, PassRating::expected)?;
    round.pass_to = f.opt_zone("pass_to")?;
    if let Some(loc) = f.opt_enum("set", SetLocation::from_token, SetLocation::expected)? {
        round.set_location = loc;
    }
    round.set_sub = f.opt_enum("set_sub", SetSub::from_token, SetSub::expected)?;
    round.set_from = f.opt_zone("set_from")?;
    if let Some(hit) = f.opt_enum("hit", HitType::from_token, HitType::expected)? {
        round.hit_type = hit;
    }
    round.hit_from = f.opt_zone("hit_from")?;
    if let Some(v) = f.take("blockers") {
        round.num_blockers = v
            .parse()
            .map_err(|_| syntax(format!("blockers must be a small non-negative integer, found `{v}`")))?;
    }
    if let Some(v) = f.take("touch") {
        round.block_touch = match v.as_str() {
            "y" => true,
            "n" => false,
            _ => {
                return Err(Diagnostic::new(
                    DiagCode::EnumValue,
                    format!("touch must be `y` or `n`, found `{v}`"),
                ))
            }
        };
    }
    round.target = f.opt_zone("target")?;
    f.finish()?;
    Ok(round)
}

/// Parse a single field value the way it would appear after `key=` on a round line.
pub(crate) fn parse_round_value(round: &mut Round, key: &str, value: &str) -> LineResult<()> {
    let mut tokens = vec![Token::Field(key.to_string(), FieldValue::Bare(value.to_string()))];
    if key != "team" {
        tokens.push(Token::Field("team".into(), FieldValue::Bare(round.team.token().into())));
    }
    let parsed = parse_round_fields(round.round_no, &tokens)?;
    match key {
        "team" => round.team = parsed.team,
        "serve" => round.serve_type = parsed.serve_type,
        "serve_from" => round.serve_from = parsed.serve_from,
        "recv_from" => round.recv_move_from = parsed.recv_move_from,
        "recv_at" => round.recv_at = parsed.recv_at,
        "pass" => round.pass_rating = parsed.pass_rating,
        "pass_to" => round.pass_to = parsed.pass_to,
        "set" => round.set_location = parsed.set_location,
        "set_sub" => round.set_sub = parsed.set_sub,
        "set_from" => round.set_from = parsed.set_from,
        "hit" => round.hit_type = parsed.hit_type,
        "hit_from" => round.hit_from = parsed.hit_from,
        "blockers" => round.num_blockers = parsed.num_blockers,
        "touch" => round.block_touch = parsed.block_touch,
        "target" => round.target = parsed.target,
        _ => unreachable!("unknown keys are rejected by parse_round_fields"),
    }
    Ok(())
}

pub(crate) const ROUND_KEYS: [&str; 15] = [
    "team", "serve", "serve_from", "recv_from", "recv_at", "pass", "pass_to", "set", "set_sub",
    "set_from", "hit", "hit_from", "blockers", "touch", "target",
];

fn syntax(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagCode::Syntax, msg)
}

fn leading_number<'a>(rest: &'a [Token], what: &str) -> LineResult<(u32, &'a [Token])> {
    let Some((first, fields)) = rest.split_first() else {
        return Err(syntax(format!("`{what}` needs a number")));
    };
    match first.as_bare().and_then(|s| s.parse::<u32>().ok()) {
        Some(n) if n >= 1 => Ok((n, fields)),
        _ => Err(syntax(format!(
            "`{what}` number must be a positive integer, found `{}`",
            first.text()
        ))),
    }
}

pub(crate) fn is_reason_token(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

fn reason(value: String) -> LineResult<String> {
    if is_reason_token(&value) {
        Ok(value)
    } else {
        Err(syntax(format!(
            "reasons are lowercase tokens of [a-z0-9_], found `{value}`"
        )))
    }
}

fn enum_value<T>(
    key: &str,
    value: &str,
    parse: fn(&str) -> Option<T>,
    expected: fn() -> String,
) -> LineResult<T> {
    parse(value).ok_or_else(|| {
        Diagnostic::new(
            DiagCode::EnumValue,
            format!("`{value}` is not a valid {key}; expected one of: {}", expected()),
        )
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FieldValue {
    Bare(String),
    Quoted(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Bare(String),
    Quoted(String),
    Field(String, FieldValue),
}

impl Token {
    fn as_bare(&self) -> Option<&str> {
        match self {
            Token::Bare(s) => Some(s),
            _ => None,
        }
    }

    fn text(&self) -> String {
        match self {
            Token::Bare(s) => s.clone(),
            Token::Quoted(s) => format!("\"{s}\""),
            Token::Field(k, FieldValue::Bare(v)) => format!("{k}={v}"),
            Token::Field(k, FieldValue::Quoted(v)) => format!("{k}=\"{v}\""),
        }
    }
}

/// Key/value fields of one record, with duplicate and unknown-key detection.
struct Fields {
    entries: Vec<(String, FieldValue)>,
}

impl Fields {
    fn new(tokens: &[Token]) -> LineResult<Self> {
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(tokens.len());
        for token in tokens {
            let Token::Field(key, value) = token else {
                return Err(syntax(format!("expected key=value, found `{}`", token.text())));
            };
            if !seen.insert(key.clone()) {
                return Err(Diagnostic::new(
                    DiagCode::DuplicateField,
                    format!("field `{key}` given more than once"),
                ));
            }
            entries.push((key.clone(), value.clone()));
        }
        Ok(Self { entries })
    }

    fn take_value(&mut self, key: &str) -> Option<FieldValue> {
        let idx = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(idx).1)
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.take_value(key).map(|v| match v {
            FieldValue::Bare(s) | FieldValue::Quoted(s) => s,
        })
    }

    fn required(&mut self, key: &str) -> LineResult<String> {
        self.take(key)
            .ok_or_else(|| syntax(format!("missing required field `{key}`")))
    }

    fn required_quoted(&mut self, key: &str) -> LineResult<String> {
        match self.take_value(key) {
            Some(FieldValue::Quoted(s)) => Ok(s),
            Some(FieldValue::Bare(s)) => Err(syntax(format!("`{key}` must be quoted, found `{s}`"))),
            None => Err(syntax(format!("missing required field `{key}`"))),
        }
    }

    fn opt_enum<T>(
        &mut self,
        key: &str,
        parse: fn(&str) -> Option<T>,
        expected: fn() -> String,
    ) -> LineResult<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) if v == "-" => Ok(None),
            Some(v) => enum_value(key, &v, parse, expected).map(Some),
        }
    }

    fn opt_zone(&mut self, key: &str) -> LineResult<Option<ZoneId>> {
        let Some(v) = self.take(key) else {
            return Ok(None);
        };
        if v == "-" {
            return Ok(None);
        }
        let n: i64 = v
            .parse()
            .map_err(|_| syntax(format!("`{key}` must be a zone number, found `{v}`")))?;
        ZoneId::from_i64(n).map(Some).map_err(|_| {
            Diagnostic::new(
                DiagCode::ZoneRange,
                format!("`{key}={n}` is outside the zone range 1..=26"),
            )
        })
    }

    fn finish(self) -> LineResult<()> {
        match self.entries.first() {
            None => Ok(()),
            Some((key, _)) => Err(syntax(format!("unknown field `{key}`"))),
        }
    }
}

fn tokenize(line: &str) -> LineResult<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let Some(&c) = chars.peek() else { break };
        if c == '"' {
            chars.next();
            tokens.push(Token::Quoted(quoted(&mut chars)?));
            continue;
        }
        let mut word = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || c == '=' || c == '"' {
                break;
            }
            word.push(c);
            chars.next();
        }
        if chars.peek() == Some(&'=') {
            chars.next();
            if word.is_empty() {
                return Err(syntax("`=` without a key"));
            }
            let value = if chars.peek() == Some(&'"') {
                chars.next();
                FieldValue::Quoted(quoted(&mut chars)?)
            } else {
                let mut v = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() {
                        break;
                    }
                    if c == '=' || c == '"' {
                        return Err(syntax(format!("unexpected `{c}` in value of `{word}`")));
                    }
                    v.push(c);
                    chars.next();
                }
                if v.is_empty() {
                    return Err(syntax(format!("field `{word}` has no value")));
                }
                FieldValue::Bare(v)
            };
            tokens.push(Token::Field(word, value));
        } else if word.is_empty() {
            return Err(syntax("unexpected quote"));
        } else {
            tokens.push(Token::Bare(word));
        }
        if chars.peek().is_some_and(|c| !c.is_whitespace()) {
            return Err(syntax("fields must be separated by whitespace"));
        }
    }
    Ok(tokens)
}

fn quoted(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> LineResult<String> {
    let mut out = String::new();
    loop {
        match chars.next() {
            None => return Err(syntax("unterminated string")),
            Some('"') => return Ok(out),
            Some('\\') => match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                other => {
                    return Err(syntax(format!(
                        "unknown escape `\\{}`",
                        other.map(String::from).unwrap_or_default()
                    )))
                }
            },
            Some(c) => out.push(c),
        }
    }
}
