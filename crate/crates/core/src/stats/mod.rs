//! Match statistics: set-location and serve-receive distributions, the
//! in/out-of-system split, pass/set quality and the attack table.
//!
//! A set's row in the attack table is decided by the pass rating of the same
//! round: sets after an in-system pass are in-system sets. Dumps, overpasses
//! and blocked sets have no attacker category and are left out of the table,
//! though they still count in the set-location distribution and the overall
//! system split.

mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::grid::{attacker_category, hit_direction, is_in_system, HitDirection, ZoneId};
use crate::model::{HitType, Match, PassRating, Round, ServeType, SetLocation, SetSub, Team};

pub use report::{
    distribution_csv, distribution_text, render_report, zones_csv, zones_text, ReportFormat,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemStatus {
    InSystem,
    OutOfSystem,
}

impl SystemStatus {
    pub const ALL: [SystemStatus; 2] = [SystemStatus::InSystem, SystemStatus::OutOfSystem];

    pub fn label(self) -> &'static str {
        match self {
            SystemStatus::InSystem => "in_system",
            SystemStatus::OutOfSystem => "out_system",
        }
    }
}

/// Attack-table row keys, in report order. `ThirtyOne` is a quick set
/// carrying the `thirty_one` refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowLocation {
    Outside,
    Bic,
    Oppo,
    DBall,
    ThirtyOne,
    Quick,
}

impl RowLocation {
    pub const ALL: [RowLocation; 6] = [
        RowLocation::Outside,
        RowLocation::Bic,
        RowLocation::Oppo,
        RowLocation::DBall,
        RowLocation::ThirtyOne,
        RowLocation::Quick,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RowLocation::Outside => "outside",
            RowLocation::Bic => "bic",
            RowLocation::Oppo => "oppo",
            RowLocation::DBall => "d-ball",
            RowLocation::ThirtyOne => "thirty_one",
            RowLocation::Quick => "quick",
        }
    }

    pub fn of(round: &Round) -> Option<RowLocation> {
        attacker_category(round.set_location)?;
        Some(match round.set_location {
            SetLocation::Outside => RowLocation::Outside,
            SetLocation::Bic => RowLocation::Bic,
            SetLocation::Oppo => RowLocation::Oppo,
            SetLocation::DBall => RowLocation::DBall,
            SetLocation::Quick if round.set_sub == Some(SetSub::ThirtyOne) => RowLocation::ThirtyOne,
            SetLocation::Quick => RowLocation::Quick,
            _ => unreachable!("only attacking set locations have a category"),
        })
    }
}

/// The system status of a set, taken from the same round's pass rating.
/// `None` when the round has no set or the pass was unrated or an overpass.
pub fn system_status(round: &Round) -> Option<SystemStatus> {
    if round.set_location == SetLocation::None {
        return None;
    }
    match round.pass_rating? {
        PassRating::InSystem => Some(SystemStatus::InSystem),
        PassRating::OutOfSystem => Some(SystemStatus::OutOfSystem),
        PassRating::Overpass => None,
    }
}

/// Line (x), angle (y) and seam (z) counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionCounters {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl DirectionCounters {
    pub fn record(&mut self, direction: HitDirection) {
        match direction {
            HitDirection::Line => self.x += 1,
            HitDirection::Angle => self.y += 1,
            HitDirection::Seam => self.z += 1,
            HitDirection::Uncounted => {}
        }
    }

    pub fn total(&self) -> u64 {
        self.x + self.y + self.z
    }

    /// `(line%, angle%, seam%)`, or `None` when nothing was counted.
    pub fn percentages(&self) -> Option<(f64, f64, f64)> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let t = total as f64;
        Some((
            self.x as f64 / t * 100.0,
            self.y as f64 / t * 100.0,
            self.z as f64 / t * 100.0,
        ))
    }

    fn merge(&mut self, other: &DirectionCounters) {
        self.x += other.x;
        self.y += other.y;
        self.z += other.z;
    }
}

/// Raw counts behind one attack-table row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCounts {
    pub sets: u64,
    /// Rounds whose hit type is neither `none` nor `overpass`.
    pub attempts: u64,
    pub spikes: u64,
    pub junk: u64,
    /// Directions of spikes with a recorded landing zone.
    pub directions: DirectionCounters,
}

impl RowCounts {
    fn merge(&mut self, other: &RowCounts) {
        self.sets += other.sets;
        self.attempts += other.attempts;
        self.spikes += other.spikes;
        self.junk += other.junk;
        self.directions.merge(&other.directions);
    }
}

/// Mergeable counts for the attack table of one team.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttackCounts {
    pub rows: BTreeMap<(SystemStatus, RowLocation), RowCounts>,
    pub rated_sets: BTreeMap<SystemStatus, u64>,
}

impl AttackCounts {
    pub fn add_round(&mut self, round: &Round) {
        let Some(status) = system_status(round) else {
            return;
        };
        *self.rated_sets.entry(status).or_default() += 1;
        let Some(location) = RowLocation::of(round) else {
            return;
        };
        let category = attacker_category(round.set_location).expect("row locations have a category");
        let row = self.rows.entry((status, location)).or_default();
        row.sets += 1;
        if round.hit_type.is_attempt() {
            row.attempts += 1;
        }
        if round.hit_type.is_junk() {
            row.junk += 1;
        }
        if round.hit_type == HitType::Hit {
            row.spikes += 1;
            if let Some(target) = round.target {
                row.directions.record(hit_direction(category, target));
            }
        }
    }

    pub fn merge(&mut self, other: &AttackCounts) {
        for (key, counts) in &other.rows {
            self.rows.entry(*key).or_default().merge(counts);
        }
        for (status, n) in &other.rated_sets {
            *self.rated_sets.entry(*status).or_default() += n;
        }
    }

    pub fn rated_total(&self) -> u64 {
        self.rated_sets.values().sum()
    }
}

pub fn tabulate_attacks<'a>(rounds: impl IntoIterator<Item = &'a Round>) -> AttackCounts {
    let mut counts = AttackCounts::default();
    for round in rounds {
        counts.add_round(round);
    }
    counts
}

fn team_rounds(matches: &[Match], team: Option<Team>) -> impl Iterator<Item = &Round> {
    matches
        .iter()
        .flat_map(|m| m.rounds().map(|(_, round)| round))
        .filter(move |round| team.is_none_or(|t| round.team == t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub status: SystemStatus,
    pub location: RowLocation,
    pub sets: u64,
    pub attempts: u64,
    /// Share of this status's attacking sets, percent.
    pub share: Option<f64>,
    pub spike: Option<f64>,
    pub junk: Option<f64>,
    pub line: Option<f64>,
    pub angle: Option<f64>,
    pub seam: Option<f64>,
}

/// The attack table for one team. `None` cells render as `NA`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub team: Team,
    pub in_share: f64,
    pub out_share: f64,
    pub rows: Vec<StatRow>,
}

impl StatReport {
    pub fn row(&self, status: SystemStatus, location: RowLocation) -> &StatRow {
        self.rows
            .iter()
            .find(|r| r.status == status && r.location == location)
            .expect("reports carry every status/location row")
    }

    pub fn overall_share(&self, status: SystemStatus) -> f64 {
        match status {
            SystemStatus::InSystem => self.in_share,
            SystemStatus::OutOfSystem => self.out_share,
        }
    }
}

fn pct(part: u64, whole: u64) -> Option<f64> {
    (whole > 0).then(|| part as f64 / whole as f64 * 100.0)
}

impl AttackCounts {
    pub fn into_report(self, team: Team) -> Result<StatReport> {
        let rated = self.rated_total();
        if rated == 0 {
            return Err(VrenError::EmptyScope(format!("team {team} has no rated sets")));
        }
        let in_count = self.rated_sets.get(&SystemStatus::InSystem).copied().unwrap_or(0);
        let mut rows = Vec::with_capacity(12);
        for status in SystemStatus::ALL {
            let status_sets: u64 = RowLocation::ALL
                .iter()
                .filter_map(|loc| self.rows.get(&(status, *loc)))
                .map(|c| c.sets)
                .sum();
            for location in RowLocation::ALL {
                let c = self.rows.get(&(status, location)).copied().unwrap_or_default();
                let directions = c.directions.percentages();
                rows.push(StatRow {
                    status,
                    location,
                    sets: c.sets,
                    attempts: c.attempts,
                    share: pct(c.sets, status_sets),
                    spike: pct(c.spikes, c.attempts),
                    junk: pct(c.junk, c.attempts),
                    line: directions.map(|d| d.0),
                    angle: directions.map(|d| d.1),
                    seam: directions.map(|d| d.2),
                });
            }
        }
        let in_share = in_count as f64 / rated as f64 * 100.0;
        Ok(StatReport {
            team,
            in_share,
            out_share: 100.0 - in_share,
            rows,
        })
    }
}

pub fn attack_table(matches: &[Match], team: Team) -> Result<StatReport> {
    tabulate_attacks(team_rounds(matches, Some(team))).into_report(team)
}

/// Percent of set events per location, over rounds whose set location is not `none`.
pub fn set_location_distribution(
    matches: &[Match],
    team: Option<Team>,
) -> Result<BTreeMap<SetLocation, f64>> {
    let mut counts: BTreeMap<SetLocation, u64> = BTreeMap::new();
    for round in team_rounds(matches, team) {
        if round.set_location != SetLocation::None {
            *counts.entry(round.set_location).or_default() += 1;
        }
    }
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(VrenError::EmptyScope("no set events in scope".into()));
    }
    Ok(counts
        .into_iter()
        .map(|(loc, n)| (loc, n as f64 / total as f64 * 100.0))
        .collect())
}

/// Reception zones of round-1 rounds, optionally for one serve type.
pub fn serve_receive_distribution(
    matches: &[Match],
    serve_type: Option<ServeType>,
) -> BTreeMap<ZoneId, u64> {
    let mut counts = BTreeMap::new();
    for (_, round) in matches.iter().flat_map(Match::rounds) {
        if round.round_no != 1 {
            continue;
        }
        if serve_type.is_some_and(|s| round.serve_type != Some(s)) {
            continue;
        }
        if let Some(zone) = round.recv_at {
            *counts.entry(zone).or_default() += 1;
        }
    }
    counts
}

/// `(in%, out%)` of the team's rated sets.
pub fn system_split(matches: &[Match], team: Team) -> Result<(f64, f64)> {
    let (mut inside, mut outside) = (0u64, 0u64);
    for round in team_rounds(matches, Some(team)) {
        match system_status(round) {
            Some(SystemStatus::InSystem) => inside += 1,
            Some(SystemStatus::OutOfSystem) => outside += 1,
            None => {}
        }
    }
    let total = inside + outside;
    if total == 0 {
        return Err(VrenError::EmptyScope(format!("team {team} has no rated sets")));
    }
    let in_pct = inside as f64 / total as f64 * 100.0;
    Ok((in_pct, 100.0 - in_pct))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassSetQuality {
    pub in_passes: u64,
    pub out_passes: u64,
    pub in_sets: u64,
    pub out_sets: u64,
    pub high_level: bool,
}

impl PassSetQuality {
    pub fn new(in_passes: u64, out_passes: u64, in_sets: u64, out_sets: u64) -> Self {
        Self {
            in_passes,
            out_passes,
            in_sets,
            out_sets,
            high_level: in_sets > in_passes && out_sets < out_passes,
        }
    }
}

/// A set's own quality: in-system when the setter played it from an
/// in-system zone. Without a recorded set origin the pass rating decides.
pub fn set_quality(round: &Round) -> Option<SystemStatus> {
    if matches!(round.set_location, SetLocation::None | SetLocation::Overpass) {
        return None;
    }
    match round.set_from {
        Some(zone) if is_in_system(zone) => Some(SystemStatus::InSystem),
        Some(_) => Some(SystemStatus::OutOfSystem),
        None => system_status(round),
    }
}

pub fn pass_set_quality(matches: &[Match], team: Team) -> Result<PassSetQuality> {
    let (mut in_p, mut out_p, mut in_s, mut out_s) = (0, 0, 0, 0);
    for round in team_rounds(matches, Some(team)) {
        match round.pass_rating {
            Some(PassRating::InSystem) => in_p += 1,
            Some(PassRating::OutOfSystem) => out_p += 1,
            _ => {}
        }
        match set_quality(round) {
            Some(SystemStatus::InSystem) => in_s += 1,
            Some(SystemStatus::OutOfSystem) => out_s += 1,
            None => {}
        }
    }
    if in_p + out_p + in_s + out_s == 0 {
        return Err(VrenError::EmptyScope(format!("team {team} has no passes or sets")));
    }
    Ok(PassSetQuality::new(in_p, out_p, in_s, out_s))
}
