use std::sync::OnceLock;

use sha2::{Digest, Sha256};

/// How a slot is laid out inside one round block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotKind {
    /// One column per category; exactly one is active unless masked.
    OneHot(Vec<String>),
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotGroup {
    Context,
    Set,
    Hit,
    Block,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub name: &'static str,
    pub kind: SlotKind,
    pub group: SlotGroup,
    pub offset: usize,
}

impl Slot {
    pub fn width(&self) -> usize {
        match &self.kind {
            SlotKind::OneHot(cats) => cats.len(),
            SlotKind::Scalar => 1,
        }
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width()
    }

    /// Column name suffixes, `{slot}_{category}`.
    pub fn column_names(&self) -> Vec<String> {
        match &self.kind {
            SlotKind::OneHot(cats) => cats.iter().map(|c| format!("{}_{c}", self.name)).collect(),
            SlotKind::Scalar => vec![format!("{}_value", self.name)],
        }
    }
}

/// The ordered slot table for a single round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLayout {
    pub slots: Vec<Slot>,
    pub width: usize,
}

fn zone_categories() -> Vec<String> {
    std::iter::once("absent".to_string())
        .chain((1..=26).map(|z| z.to_string()))
        .collect()
}

fn enum_categories(tokens: &[&str]) -> Vec<String> {
    std::iter::once("absent")
        .chain(tokens.iter().copied())
        .map(str::to_string)
        .collect()
}

impl FeatureLayout {
    fn build() -> Self {
        use crate::model::{HitType, PassRating, ServeType, SetLocation, SetSub};
        use SlotGroup::*;

        let tokens = |all: Vec<&'static str>| enum_categories(&all);
        let table: Vec<(&'static str, SlotKind, SlotGroup)> = vec![
            ("team_a", SlotKind::Scalar, Context),
            ("serve", SlotKind::OneHot(tokens(ServeType::ALL.iter().map(|v| v.token()).collect())), Context),
            ("serve_from", SlotKind::OneHot(zone_categories()), Context),
            ("recv_from", SlotKind::OneHot(zone_categories()), Context),
            ("recv_at", SlotKind::OneHot(zone_categories()), Context),
            ("pass", SlotKind::OneHot(tokens(PassRating::ALL.iter().map(|v| v.token()).collect())), Context),
            ("pass_to", SlotKind::OneHot(zone_categories()), Context),
            ("set", SlotKind::OneHot(tokens(SetLocation::ALL.iter().map(|v| v.token()).collect())), Set),
            ("set_sub", SlotKind::OneHot(tokens(SetSub::ALL.iter().map(|v| v.token()).collect())), Set),
            ("set_from", SlotKind::OneHot(zone_categories()), Set),
            ("hit", SlotKind::OneHot(tokens(HitType::ALL.iter().map(|v| v.token()).collect())), Hit),
            ("hit_from", SlotKind::OneHot(zone_categories()), Hit),
            ("blockers", SlotKind::Scalar, Block),
            ("touch", SlotKind::Scalar, Block),
            ("target", SlotKind::OneHot(zone_categories()), Target),
        ];
        let mut offset = 0;
        let slots = table
            .into_iter()
            .map(|(name, kind, group)| {
                let slot = Slot {
                    name,
                    kind,
                    group,
                    offset,
                };
                offset += slot.width();
                slot
            })
            .collect();
        FeatureLayout {
            slots,
            width: offset,
        }
    }

    /// The single layout used by every encoder and model.
    pub fn get() -> &'static FeatureLayout {
        static LAYOUT: OnceLock<FeatureLayout> = OnceLock::new();
        LAYOUT.get_or_init(FeatureLayout::build)
    }

    pub fn slot(&self, name: &str) -> &Slot {
        self.slots
            .iter()
            .find(|s| s.name == name)
            .unwrap_or_else(|| panic!("no slot named {name}"))
    }

    /// Short hex digest of the slot table; model files record it.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for slot in &self.slots {
            hasher.update(slot.name.as_bytes());
            hasher.update(b":");
            for name in slot.column_names() {
                hasher.update(name.as_bytes());
                hasher.update(b"|");
            }
            hasher.update(b";");
        }
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Column names for a window of `k` prior rounds plus the current one,
    /// oldest block first: `r{k}_...` through `r0_...`.
    pub fn column_names(&self, k: usize) -> Vec<String> {
        let mut names = Vec::with_capacity((k + 1) * self.width);
        for back in (0..=k).rev() {
            for slot in &self.slots {
                names.extend(slot.column_names().into_iter().map(|c| format!("r{back}_{c}")));
            }
        }
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_is_sum_of_slots() {
        let layout = FeatureLayout::get();
        assert_eq!(layout.width, 222);
        assert_eq!(layout.slots.iter().map(Slot::width).sum::<usize>(), layout.width);
    }

    #[test]
    fn slots_tile_the_block() {
        let layout = FeatureLayout::get();
        let mut next = 0;
        for slot in &layout.slots {
            assert_eq!(slot.offset, next, "{}", slot.name);
            next = slot.range().end;
        }
        assert_eq!(next, layout.width);
    }

    #[test]
    fn column_names_are_unique() {
        let names = FeatureLayout::get().column_names(2);
        let unique: std::collections::HashSet<_> = names.iter().collect();
        assert_eq!(names.len(), 3 * 222);
        assert_eq!(unique.len(), names.len());
        assert_eq!(names[0], "r2_team_a_value");
        assert_eq!(names.last().unwrap(), "r0_target_26");
    }

    #[test]
    fn hash_is_stable() {
        let h = FeatureLayout::get().hash();
        assert_eq!(h.len(), 16);
        assert_eq!(h, FeatureLayout::build().hash());
    }
}
