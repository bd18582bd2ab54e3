//! The 26-zone court grid and every rule derived from zone membership.
//!
//! Each side of the net is split into 26 zones. Zones 1-15 are in bounds and
//! laid out as a 3x5 block: 1-5 along the end line, 6-10 mid-court and 11-15
//! along the net. Zones 16-26 are out of bounds: 16 and 26 flank the net
//! corners beside 11 and 15, 17-21 lie behind the end line and 22-25 run
//! along the sidelines beside the back rows. The geometry is presentational;
//! only the set memberships below are used by any computation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VrenError};
use crate::model::{PassRating, SetLocation};

pub const ZONE_COUNT: u8 = 26;

/// A zone index in `1..=26`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ZoneId(u8);

impl ZoneId {
    pub fn new(id: u8) -> Result<Self> {
        Self::from_i64(i64::from(id))
    }

    pub fn from_i64(id: i64) -> Result<Self> {
        if (1..=i64::from(ZONE_COUNT)).contains(&id) {
            Ok(ZoneId(id as u8))
        } else {
            Err(VrenError::ZoneRange(id))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = ZoneId> {
        (1..=ZONE_COUNT).map(ZoneId)
    }
}

impl TryFrom<u8> for ZoneId {
    type Error = VrenError;

    fn try_from(id: u8) -> Result<Self> {
        ZoneId::new(id)
    }
}

impl From<ZoneId> for u8 {
    fn from(zone: ZoneId) -> u8 {
        zone.0
    }
}

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowClass {
    Front,
    Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundsClass {
    InBounds,
    OutOfBounds,
}

pub const FRONT_ROW: [u8; 7] = [11, 12, 13, 14, 15, 16, 26];
pub const IN_SYSTEM_ZONES: [u8; 3] = [11, 12, 13];

/// Landing-zone groups used by the attack-direction counters.
pub const S1: [u8; 4] = [1, 2, 6, 7];
pub const S2: [u8; 4] = [4, 5, 9, 10];
pub const S3: [u8; 2] = [3, 8];
pub const S4: [u8; 2] = [11, 12];
pub const S5: [u8; 2] = [14, 15];

pub fn zone_row(zone: ZoneId) -> RowClass {
    if FRONT_ROW.contains(&zone.0) {
        RowClass::Front
    } else {
        RowClass::Back
    }
}

pub fn zone_bounds(zone: ZoneId) -> BoundsClass {
    if zone.0 <= 15 {
        BoundsClass::InBounds
    } else {
        BoundsClass::OutOfBounds
    }
}

pub fn is_in_system(zone: ZoneId) -> bool {
    IN_SYSTEM_ZONES.contains(&zone.0)
}

pub fn pass_rating_for(pass_to: ZoneId, crossed_net: bool) -> PassRating {
    if crossed_net {
        PassRating::Overpass
    } else if is_in_system(pass_to) {
        PassRating::InSystem
    } else {
        PassRating::OutOfSystem
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AttackerCategory {
    Outside,
    /// Middle blockers, plus the back-row outside hitter attacking a bic.
    MiddleOrBic,
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HitDirection {
    Line,
    Angle,
    Seam,
    Uncounted,
}

/// `None` for set locations that do not feed the direction statistics.
pub fn attacker_category(set_location: SetLocation) -> Option<AttackerCategory> {
    match set_location {
        SetLocation::Outside => Some(AttackerCategory::Outside),
        SetLocation::Quick | SetLocation::Bic => Some(AttackerCategory::MiddleOrBic),
        SetLocation::Oppo | SetLocation::DBall => Some(AttackerCategory::Opposite),
        SetLocation::Dump | SetLocation::None | SetLocation::Overpass | SetLocation::Blocked => None,
    }
}

pub fn hit_direction(category: AttackerCategory, landing: ZoneId) -> HitDirection {
    let b = landing.0;
    let in_any = |sets: &[&[u8]]| sets.iter().any(|s| s.contains(&b));
    let (line, angle): (&[&[u8]], &[&[u8]]) = match category {
        AttackerCategory::Outside => (&[&S1], &[&S2, &S5]),
        AttackerCategory::MiddleOrBic => (&[&S1, &S4], &[&S2, &S5]),
        AttackerCategory::Opposite => (&[&S2], &[&S1, &S4]),
    };
    if in_any(line) {
        HitDirection::Line
    } else if in_any(angle) {
        HitDirection::Angle
    } else if S3.contains(&b) {
        HitDirection::Seam
    } else {
        HitDirection::Uncounted
    }
}
