//! Fixed-width numeric encodings of rounds and round windows, and dataset
//! assembly for the three prediction tasks.
//!
//! A round becomes a block of [`FeatureLayout::width`] values. Optional fields
//! that are absent activate the `absent` category of their slot, the blocker
//! count is scaled by 1/3 and the team slot is 1 for team A. A window is the
//! `k` rounds preceding the current one, oldest first, followed by the current
//! round. Missing history is filled with all-absent padding blocks.

mod export;
mod layout;

use std::borrow::Borrow;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::grid::ZoneId;
use crate::model::{winner_label, HitType, Match, Round, SetLocation, Team};

pub use export::{export_features, read_features, write_features, FeatureFormat};
pub use layout::{FeatureLayout, Slot, SlotGroup, SlotKind};

pub const DEFAULT_WINDOW: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskKind {
    #[default]
    NoMask,
    /// Hides the set, hit, block and target slots of the current round.
    MaskFromSet,
    /// Hides the hit and target slots of the current round.
    MaskFromHit,
}

impl MaskKind {
    pub fn hides(self, group: SlotGroup) -> bool {
        match self {
            MaskKind::NoMask => false,
            MaskKind::MaskFromSet => matches!(
                group,
                SlotGroup::Set | SlotGroup::Hit | SlotGroup::Block | SlotGroup::Target
            ),
            MaskKind::MaskFromHit => matches!(group, SlotGroup::Hit | SlotGroup::Target),
        }
    }
}

fn zone_index(zone: Option<ZoneId>) -> usize {
    zone.map_or(0, |z| usize::from(z.get()))
}

fn enum_index<T: PartialEq + Copy>(all: &[T], value: Option<T>) -> usize {
    value.map_or(0, |v| all.iter().position(|a| *a == v).expect("value is in ALL") + 1)
}

/// Encode one round, or an all-absent padding block when `round` is `None`.
pub fn encode_round(round: Option<&Round>, mask: MaskKind) -> Vec<f64> {
    let layout = FeatureLayout::get();
    let mut out = vec![0.0; layout.width];
    encode_into(&mut out, round, mask);
    out
}

fn encode_into(out: &mut [f64], round: Option<&Round>, mask: MaskKind) {
    use crate::model::{PassRating, ServeType, SetSub};

    let layout = FeatureLayout::get();
    for slot in &layout.slots {
        if mask.hides(slot.group) {
            continue;
        }
        let cell = match (slot.name, round) {
            ("team_a", r) => Cell::Scalar(if r.is_some_and(|r| r.team == Team::A) { 1.0 } else { 0.0 }),
            ("blockers", r) => Cell::Scalar(r.map_or(0.0, |r| f64::from(r.num_blockers) / 3.0)),
            ("touch", r) => Cell::Scalar(if r.is_some_and(|r| r.block_touch) { 1.0 } else { 0.0 }),
            (_, None) => Cell::Hot(0),
            ("serve", Some(r)) => Cell::Hot(enum_index(ServeType::ALL, r.serve_type)),
            ("serve_from", Some(r)) => Cell::Hot(zone_index(r.serve_from)),
            ("recv_from", Some(r)) => Cell::Hot(zone_index(r.recv_move_from)),
            ("recv_at", Some(r)) => Cell::Hot(zone_index(r.recv_at)),
            ("pass", Some(r)) => Cell::Hot(enum_index(PassRating::ALL, r.pass_rating)),
            ("pass_to", Some(r)) => Cell::Hot(zone_index(r.pass_to)),
            ("set", Some(r)) => Cell::Hot(enum_index(SetLocation::ALL, Some(r.set_location))),
            ("set_sub", Some(r)) => Cell::Hot(enum_index(SetSub::ALL, r.set_sub)),
            ("set_from", Some(r)) => Cell::Hot(zone_index(r.set_from)),
            ("hit", Some(r)) => Cell::Hot(enum_index(HitType::ALL, Some(r.hit_type))),
            ("hit_from", Some(r)) => Cell::Hot(zone_index(r.hit_from)),
            ("target", Some(r)) => Cell::Hot(zone_index(r.target)),
            (name, _) => unreachable!("slot {name} has no encoder"),
        };
        match cell {
            Cell::Scalar(v) => out[slot.offset] = v,
            Cell::Hot(i) => out[slot.offset + i] = 1.0,
        }
    }
}

enum Cell {
    Scalar(f64),
    Hot(usize),
}

/// Encode the `k` rounds before the last element of `history`, then the last
/// element itself with `mask` applied. Only the current round is masked.
pub fn encode_window<R: Borrow<Round>>(history: &[R], k: usize, mask: MaskKind) -> Vec<f64> {
    assert!(!history.is_empty(), "window history must contain the current round");
    let w = FeatureLayout::get().width;
    let mut out = vec![0.0; (k + 1) * w];
    let current = history.len() - 1;
    for block in 0..=k {
        let back = k - block;
        let dst = &mut out[block * w..(block + 1) * w];
        if back == 0 {
            encode_into(dst, Some(history[current].borrow()), mask);
        } else if back <= current {
            encode_into(dst, Some(history[current - back].borrow()), MaskKind::NoMask);
        } else {
            encode_into(dst, None, MaskKind::NoMask);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    RallyWinner,
    SetType,
    HitType,
}

pub const SET_TYPE_CLASSES: [&str; 9] = [
    "quick", "outside", "oppo", "bic", "d-ball", "dump", "overpass", "blank", "blocked",
];
pub const HIT_TYPE_CLASSES: [&str; 9] = [
    "hit", "off_speed", "roll_shot", "tip", "free_ball", "dump", "overpass", "blocked", "blank",
];

impl TaskKind {
    pub fn classes(self) -> &'static [&'static str] {
        match self {
            TaskKind::RallyWinner => &["team_b", "team_a"],
            TaskKind::SetType => &SET_TYPE_CLASSES,
            TaskKind::HitType => &HIT_TYPE_CLASSES,
        }
    }

    pub fn mask(self) -> MaskKind {
        match self {
            TaskKind::RallyWinner => MaskKind::NoMask,
            TaskKind::SetType => MaskKind::MaskFromSet,
            TaskKind::HitType => MaskKind::MaskFromHit,
        }
    }

    pub fn is_binary(self) -> bool {
        self == TaskKind::RallyWinner
    }
}

impl std::str::FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rally-winner" | "rally_winner" => Ok(TaskKind::RallyWinner),
            "set-type" | "set_type" => Ok(TaskKind::SetType),
            "hit-type" | "hit_type" => Ok(TaskKind::HitType),
            other => Err(format!("unknown task `{other}` (rally-winner, set-type, hit-type)")),
        }
    }
}

pub fn set_type_label(loc: SetLocation) -> usize {
    match loc {
        SetLocation::Quick => 0,
        SetLocation::Outside => 1,
        SetLocation::Oppo => 2,
        SetLocation::Bic => 3,
        SetLocation::DBall => 4,
        SetLocation::Dump => 5,
        SetLocation::Overpass => 6,
        SetLocation::None => 7,
        SetLocation::Blocked => 8,
    }
}

pub fn hit_type_label(hit: HitType) -> usize {
    match hit {
        HitType::Hit => 0,
        HitType::OffSpeed => 1,
        HitType::RollShot => 2,
        HitType::Tip => 3,
        HitType::FreeBall => 4,
        HitType::Dump => 5,
        HitType::Overpass => 6,
        HitType::Blocked => 7,
        HitType::None => 8,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowOptions {
    pub k: usize,
    /// Let the window reach into earlier rallies of the same match.
    pub cross_rally: bool,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_WINDOW,
            cross_rally: true,
        }
    }
}

impl WindowOptions {
    pub fn new(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

/// Encoded examples, row-major, with one label and one match id per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub window: usize,
    pub width: usize,
    pub x: Vec<f64>,
    pub y: Vec<usize>,
    pub groups: Vec<String>,
}

impl FeatureMatrix {
    pub fn empty(window: usize) -> Self {
        Self {
            window,
            width: (window + 1) * FeatureLayout::get().width,
            x: Vec::new(),
            y: Vec::new(),
            groups: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.width.max(1)).take(self.len())
    }

    pub fn push(&mut self, features: Vec<f64>, label: usize, group: &str) {
        assert_eq!(features.len(), self.width);
        self.x.extend(features);
        self.y.push(label);
        self.groups.push(group.to_string());
    }

    /// Rows whose group is in `groups`, order preserved.
    pub fn select_groups(&self, groups: &[String]) -> FeatureMatrix {
        let mut out = FeatureMatrix::empty(self.window);
        out.width = self.width;
        for i in 0..self.len() {
            if groups.contains(&self.groups[i]) {
                out.push(self.row(i).to_vec(), self.y[i], &self.groups[i]);
            }
        }
        out
    }
}

/// The rounds a window may see for every round of a match, in order, as
/// `(rally index, history slice end)` pairs over the flattened round list.
fn match_histories(m: &Match, cross_rally: bool) -> (Vec<&Round>, Vec<(usize, usize, usize)>) {
    let mut flat = Vec::new();
    let mut spans = Vec::new();
    for (ri, rally) in m.rallies.iter().enumerate() {
        let rally_start = flat.len();
        for round in &rally.rounds {
            flat.push(round);
            let start = if cross_rally { 0 } else { rally_start };
            spans.push((ri, start, flat.len()));
        }
    }
    (flat, spans)
}

pub fn build_dataset(matches: &[Match], task: TaskKind, opts: WindowOptions) -> Result<FeatureMatrix> {
    let mut fm = FeatureMatrix::empty(opts.k);
    let mask = task.mask();
    for m in matches {
        let (flat, spans) = match_histories(m, opts.cross_rally);
        for (ri, start, end) in spans {
            let rally = &m.rallies[ri];
            let round = flat[end - 1];
            let label = match task {
                TaskKind::RallyWinner => usize::from(winner_label(rally)),
                TaskKind::SetType if !round.has_first_contact() => continue,
                TaskKind::SetType => set_type_label(round.set_location),
                TaskKind::HitType => hit_type_label(round.hit_type),
            };
            fm.push(encode_window(&flat[start..end], opts.k, mask), label, &m.match_id);
        }
    }
    if fm.is_empty() {
        return Err(VrenError::EmptyScope(format!("no {task:?} examples in scope")));
    }
    Ok(fm)
}

/// Window encodings for each round of one rally, given the rounds of the
/// match that precede it.
pub fn rally_windows(
    context: &[Round],
    rounds: &[Round],
    opts: WindowOptions,
    mask: MaskKind,
) -> Vec<Vec<f64>> {
    let mut history: Vec<&Round> = if opts.cross_rally {
        context.iter().collect()
    } else {
        Vec::new()
    };
    let mut out = Vec::with_capacity(rounds.len());
    for round in rounds {
        history.push(round);
        out.push(encode_window(&history, opts.k, mask));
    }
    out
}
