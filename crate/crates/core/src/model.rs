//! Rally, round and match data model, plus structural validation.

use serde::{Deserialize, Serialize};

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::grid::{pass_rating_for, ZoneId};

/// Declares a closed enumeration whose textual token is shared by the `.vren`
/// grammar and the JSON form.
macro_rules! token_enum {
    (
        $(#[$meta:meta])*
        pub enum $name:ident { $( $variant:ident => $token:literal ),+ $(,)? }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $( #[serde(rename = $token)] $variant, )+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[ $( $name::$variant ),+ ];

            pub fn token(self) -> &'static str {
                match self { $( $name::$variant => $token, )+ }
            }

            pub fn from_token(token: &str) -> Option<Self> {
                match token { $( $token => Some($name::$variant), )+ _ => None }
            }

            /// Comma-separated token list, for error messages.
            pub fn expected() -> String {
                [$( $token ),+].join(", ")
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.token())
            }
        }
    };
}

token_enum! {
    pub enum Team { A => "A", B => "B" }
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::A => Team::B,
            Team::B => Team::A,
        }
    }
}

token_enum! {
    pub enum ServeType { Float => "float", Jump => "jump", Hybrid => "hybrid" }
}

token_enum! {
    pub enum PassRating { InSystem => "in", OutOfSystem => "out", Overpass => "overpass" }
}

token_enum! {
    /// Where the setter delivers the ball. `None` means no set happened.
    pub enum SetLocation {
        Outside => "outside",
        Quick => "quick",
        Oppo => "oppo",
        Bic => "bic",
        DBall => "dball",
        Dump => "dump",
        Overpass => "overpass",
        None => "none",
        Blocked => "blocked",
    }
}

token_enum! {
    /// Optional refinement of a set location.
    pub enum SetSub { ThirtyOne => "thirty_one" }
}

token_enum! {
    pub enum HitType {
        Hit => "hit",
        OffSpeed => "off_speed",
        RollShot => "roll_shot",
        Tip => "tip",
        FreeBall => "free_ball",
        Dump => "dump",
        Overpass => "overpass",
        Blocked => "blocked",
        None => "none",
    }
}

impl HitType {
    /// Roll shots, tips and off-speed attacks.
    pub fn is_junk(self) -> bool {
        matches!(self, HitType::RollShot | HitType::Tip | HitType::OffSpeed)
    }

    /// Counts towards the attack-attempt denominator of the attack table.
    pub fn is_attempt(self) -> bool {
        !matches!(self, HitType::None | HitType::Overpass)
    }
}

token_enum! {
    pub enum Level { College => "college", Professional => "professional", Synthetic => "synthetic" }
}

/// One team's possession of the ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Round {
    pub round_no: u32,
    pub team: Team,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub serve_type: Option<ServeType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub serve_from: Option<ZoneId>,
    /// Where the digger or passer moved from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recv_move_from: Option<ZoneId>,
    /// Where the first contact happened.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recv_at: Option<ZoneId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass_rating: Option<PassRating>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass_to: Option<ZoneId>,
    pub set_location: SetLocation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_sub: Option<SetSub>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_from: Option<ZoneId>,
    pub hit_type: HitType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hit_from: Option<ZoneId>,
    pub num_blockers: u8,
    pub block_touch: bool,
    /// Destination of the ball leaving this possession.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ZoneId>,
}

impl Round {
    /// A round with only the mandatory fields set; everything optional is absent.
    pub fn new(round_no: u32, team: Team) -> Self {
        Self {
            round_no,
            team,
            serve_type: None,
            serve_from: None,
            recv_move_from: None,
            recv_at: None,
            pass_rating: None,
            pass_to: None,
            set_location: SetLocation::None,
            set_sub: None,
            set_from: None,
            hit_type: HitType::None,
            hit_from: None,
            num_blockers: 0,
            block_touch: false,
            target: None,
        }
    }

    /// The team had a first contact in this possession.
    pub fn has_first_contact(&self) -> bool {
        self.recv_at.is_some() || self.pass_rating.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rally {
    pub rally_no: u32,
    pub winner: Team,
    pub winning_reason: String,
    pub losing_reason: String,
    pub rounds: Vec<Round>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Match {
    pub match_id: String,
    pub team_a: String,
    pub team_b: String,
    pub level: Level,
    pub rallies: Vec<Rally>,
}

impl Match {
    pub fn new(match_id: impl Into<String>, team_a: impl Into<String>, team_b: impl Into<String>) -> Self {
        Self {
            match_id: match_id.into(),
            team_a: team_a.into(),
            team_b: team_b.into(),
            level: Level::Professional,
            rallies: Vec::new(),
        }
    }

    pub fn rounds(&self) -> impl Iterator<Item = (&Rally, &Round)> {
        self.rallies
            .iter()
            .flat_map(|rally| rally.rounds.iter().map(move |round| (rally, round)))
    }
}

/// 1 when team A won the rally, 0 otherwise.
pub fn winner_label(rally: &Rally) -> u8 {
    match rally.winner {
        Team::A => 1,
        Team::B => 0,
    }
}

/// Structural and per-round checks for one rally.
///
/// Returns diagnostics in round order; an empty list means the rally is
/// clean. Deterministic for identical input.
pub fn validate_rally(rally: &Rally) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let at = |code: DiagCode, round_no: Option<u32>, msg: String| {
        let d = Diagnostic::new(code, msg).in_rally(rally.rally_no);
        match round_no {
            Some(r) => d.in_round(r),
            None => d,
        }
    };

    if rally.rounds.is_empty() {
        out.push(at(DiagCode::EmptyRally, None, "rally has no rounds".into()));
        return out;
    }

    for (idx, round) in rally.rounds.iter().enumerate() {
        let expected = idx as u32 + 1;
        if round.round_no != expected {
            out.push(at(
                DiagCode::RoundGap,
                Some(round.round_no),
                format!("expected round {expected}, found {}", round.round_no),
            ));
        }

        if idx > 0 {
            let prev = &rally.rounds[idx - 1];
            if prev.team == round.team {
                if prev.block_touch {
                    out.push(at(
                        DiagCode::TeamRepeatAfterTouch,
                        Some(round.round_no),
                        format!("team {} keeps the ball after a block touch", round.team),
                    ));
                } else {
                    out.push(at(
                        DiagCode::TeamAlternation,
                        Some(round.round_no),
                        format!("team {} has two consecutive rounds", round.team),
                    ));
                }
            }
        }

        out.extend(
            check_round(round)
                .into_iter()
                .map(|(code, msg)| at(code, Some(round.round_no), msg)),
        );
    }
    out
}

fn check_round(round: &Round) -> Vec<(DiagCode, String)> {
    let mut out = Vec::new();
    let has_serve = round.serve_type.is_some() || round.serve_from.is_some();
    if round.round_no != 1 && has_serve {
        out.push((
            DiagCode::ServeNotRound1,
            "serve fields are only allowed on round 1".to_string(),
        ));
    }
    if round.round_no == 1 && (round.serve_type.is_none() || round.serve_from.is_none()) {
        out.push((
            DiagCode::ServeIncomplete,
            "round 1 should record serve type and serve origin".to_string(),
        ));
    }

    if round.pass_rating == Some(PassRating::Overpass)
        && (round.set_location != SetLocation::Overpass || round.hit_type != HitType::Overpass)
    {
        out.push((
            DiagCode::OverpassPropagation,
            format!(
                "overpass pass requires set=overpass and hit=overpass, found set={} hit={}",
                round.set_location, round.hit_type
            ),
        ));
    }

    if let (Some(rating), Some(to)) = (round.pass_rating, round.pass_to) {
        if rating != PassRating::Overpass {
            let expected = pass_rating_for(to, false);
            if expected != rating {
                out.push((
                    DiagCode::PassRatingMismatch,
                    format!("pass to zone {to} is rated {expected}, recorded as {rating}"),
                ));
            }
        }
    }

    if round.num_blockers > 3 {
        out.push((
            DiagCode::BlockersRange,
            format!("{} blockers, at most 3 allowed", round.num_blockers),
        ));
    }
    if round.block_touch && round.num_blockers == 0 {
        out.push((
            DiagCode::TouchWithoutBlocker,
            "block touch recorded with zero blockers".to_string(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zone(id: u8) -> ZoneId {
        ZoneId::new(id).unwrap()
    }

    fn rally(teams: &[Team]) -> Rally {
        let rounds = teams
            .iter()
            .enumerate()
            .map(|(i, &team)| {
                let mut r = Round::new(i as u32 + 1, team);
                if i == 0 {
                    r.serve_type = Some(ServeType::Jump);
                    r.serve_from = Some(zone(19));
                }
                r
            })
            .collect();
        Rally {
            rally_no: 1,
            winner: Team::A,
            winning_reason: "kill".into(),
            losing_reason: "dig_error".into(),
            rounds,
        }
    }

    fn codes(r: &Rally) -> Vec<DiagCode> {
        validate_rally(r).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn clean_three_round_rally() {
        assert!(validate_rally(&rally(&[Team::A, Team::B, Team::A])).is_empty());
    }

    #[test]
    fn round_gap() {
        let mut r = rally(&[Team::A, Team::B]);
        r.rounds[1].round_no = 3;
        let diags = validate_rally(&r);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::RoundGap);
        assert_eq!(diags[0].round_no, Some(3));
    }

    #[test]
    fn team_alternation() {
        assert_eq!(codes(&rally(&[Team::A, Team::A])), vec![DiagCode::TeamAlternation]);
    }

    #[test]
    fn block_touch_downgrades_alternation() {
        let mut r = rally(&[Team::A, Team::A]);
        r.rounds[0].num_blockers = 2;
        r.rounds[0].block_touch = true;
        let diags = validate_rally(&r);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::TeamRepeatAfterTouch);
        assert!(!diags[0].is_error());
    }

    #[test]
    fn empty_rally() {
        assert_eq!(codes(&rally(&[])), vec![DiagCode::EmptyRally]);
    }

    #[test]
    fn serve_outside_round_one() {
        let mut r = rally(&[Team::A, Team::B]);
        r.rounds[1].serve_type = Some(ServeType::Jump);
        assert_eq!(codes(&r), vec![DiagCode::ServeNotRound1]);
    }

    #[test]
    fn round_one_without_serve_is_warning() {
        let mut r = rally(&[Team::A]);
        r.rounds[0].serve_from = None;
        let diags = validate_rally(&r);
        assert_eq!(diags[0].code, DiagCode::ServeIncomplete);
        assert!(!diags[0].is_error());
    }

    #[test]
    fn overpass_must_propagate() {
        let mut r = rally(&[Team::A]);
        r.rounds[0].pass_rating = Some(PassRating::Overpass);
        r.rounds[0].set_location = SetLocation::Overpass;
        assert_eq!(codes(&r), vec![DiagCode::OverpassPropagation]);
        r.rounds[0].hit_type = HitType::Overpass;
        assert!(codes(&r).is_empty());
    }

    #[test]
    fn pass_rating_mismatch() {
        let mut r = rally(&[Team::A]);
        r.rounds[0].pass_to = Some(zone(12));
        r.rounds[0].pass_rating = Some(PassRating::OutOfSystem);
        assert_eq!(codes(&r), vec![DiagCode::PassRatingMismatch]);
    }

    #[test]
    fn blockers_out_of_range() {
        let mut r = rally(&[Team::A]);
        r.rounds[0].num_blockers = 4;
        assert_eq!(codes(&r), vec![DiagCode::BlockersRange]);
    }

    #[test]
    fn touch_needs_a_blocker() {
        let mut r = rally(&[Team::A]);
        r.rounds[0].block_touch = true;
        assert_eq!(codes(&r), vec![DiagCode::TouchWithoutBlocker]);
    }

    #[test]
    fn validation_is_deterministic() {
        let mut r = rally(&[Team::A, Team::A, Team::B]);
        r.rounds[2].round_no = 7;
        assert_eq!(validate_rally(&r), validate_rally(&r));
    }

    #[test]
    fn winner_labels() {
        let mut r = rally(&[Team::A]);
        assert_eq!(winner_label(&r), 1);
        r.winner = Team::B;
        assert_eq!(winner_label(&r), 0);
    }

    #[test]
    fn tokens_round_trip() {
        for &loc in SetLocation::ALL {
            assert_eq!(SetLocation::from_token(loc.token()), Some(loc));
        }
        for &hit in HitType::ALL {
            assert_eq!(HitType::from_token(hit.token()), Some(hit));
        }
        assert_eq!(PassRating::from_token("in"), Some(PassRating::InSystem));
        assert_eq!(ServeType::from_token("Jump"), None);
    }
}
