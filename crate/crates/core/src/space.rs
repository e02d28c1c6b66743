//! Bit accounting for an index, serialized as JSON.

use crate::index::SkylineIndex;
use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct KindTotals {
    pub child_slots: u64,
    pub parent_positions: u64,
    pub signatures: u64,
    pub prefix_sums: u64,
    pub range_max: u64,
    pub multislab: u64,
    pub ball_inheritance: u64,
    pub point_maps: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTotals {
    pub level: usize,
    pub nodes: usize,
    pub bits: u64,
    /// `bits / (n lg Δ)`.
    pub per_n_lg_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpaceReport {
    pub n: usize,
    pub delta: usize,
    pub height: usize,
    pub ball_fan: usize,
    pub kinds: KindTotals,
    pub levels: Vec<LevelTotals>,
    /// Largest per-level `bits / (n lg Δ)`.
    pub level_constant: f64,
    /// Bits of the counting structure (the tree).
    pub counting_bits: u64,
    /// `counting_bits / (n lg n)`.
    pub counting_ratio: f64,
    pub total_bits: u64,
    /// `total_bits / (n lg n)`.
    pub total_ratio: f64,
}

impl SpaceReport {
    pub fn of(index: &SkylineIndex) -> Self {
        let tree = index.tree();
        let n = index.len();
        let lg_delta = (tree.delta() as f64).log2();
        let mut kinds = KindTotals::default();
        let mut levels = Vec::new();
        for level in 1..=tree.height() {
            let s = tree.level_space(level);
            kinds.child_slots += s.slots;
            kinds.parent_positions += s.pi;
            kinds.signatures += s.signatures;
            kinds.prefix_sums += s.prefix;
            kinds.range_max += s.rmq;
            kinds.multislab += s.multislab;
            levels.push(LevelTotals {
                level,
                nodes: tree.level_len(level),
                bits: s.total(),
                per_n_lg_delta: s.total() as f64 / (n as f64 * lg_delta),
            });
        }
        kinds.ball_inheritance = index.ball().size_bits();
        // y-ranks plus two raw key arrays when present
        let maps = if index.points().has_raw() { 5 } else { 1 };
        kinds.point_maps = 64 * maps * n as u64;
        let counting_bits = tree.size_bits();
        let total_bits = counting_bits + kinds.ball_inheritance + kinds.point_maps;
        let nlgn = if n < 2 {
            1.0
        } else {
            n as f64 * (n as f64).log2()
        };
        Self {
            n,
            delta: tree.delta(),
            height: tree.height(),
            ball_fan: index.ball().fan(),
            level_constant: levels.iter().map(|l| l.per_n_lg_delta).fold(0.0, f64::max),
            levels,
            kinds,
            counting_bits,
            counting_ratio: counting_bits as f64 / nlgn,
            total_bits,
            total_ratio: total_bits as f64 / nlgn,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("space report serializes")
    }
}
