//! Recursive hue-range subdivision with depth-based chroma and luminance.
//!
//! The root owns the configured hue range. Each node's children split the
//! node's range (evenly or by sub-tree size) in permuted order, every child
//! slot is shrunk around its center by the hue fraction, and the child takes
//! the slot's center as its hue. Chroma and luminance interpolate linearly
//! between the top and leaf values of the configured intervals.
//!
//! When hue slices are excluded, all subdivision happens on a shorter
//! virtual circle whose length is the allowed hue measure; hues are mapped
//! onto the real circle only at the end. Reported `hue` values, slots and
//! ranges are virtual ("nominal"); `actual_hue` is on the real circle.

mod config;
mod preset;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use config::{
    map_excluded_hue, HueExclusions, HueRange, InterpolationMode, PaletteConfig, Permutation,
    SizeWeight, SplitMode, MAX_EXCLUDED_DEGREES,
};
pub use preset::{preset, AnalysisFocus, HierarchySize, Preset, Theme};

use crate::color_space::{check_gamut, hcl_to_srgb, normalize_degrees, HclColor};
use crate::error::{HierarchyError, PaletteError};
use crate::hierarchy::{Hierarchy, NodeId, TreeNode, MAX_DEPTH, MAX_NODES};

/// Tiles `range` with one sub-range per child, in the given order.
pub fn split_hue_range(
    range: HueRange,
    children: &[&TreeNode],
    mode: SplitMode,
    weight: SizeWeight,
) -> Vec<HueRange> {
    let k = children.len();
    let weights: Vec<f64> = match mode {
        SplitMode::Even => vec![1.0; k],
        SplitMode::Proportional => children
            .iter()
            .map(|c| match weight {
                SizeWeight::LeafCount => c.leaf_count as f64,
                SizeWeight::NodeCount => c.node_count as f64,
            })
            .collect(),
    };
    let total: f64 = weights.iter().sum();
    let mut cursor = range.start;
    weights
        .iter()
        .map(|w| {
            let width = if k == 1 { range.width } else { range.width * w / total };
            let sub = HueRange {
                start: cursor,
                width,
                circular: false,
            };
            cursor += width;
            sub
        })
        .collect()
}

/// Centered sub-range keeping fraction `f` of the width.
pub fn shrink_range(range: HueRange, f: f64) -> HueRange {
    HueRange {
        start: range.start + 0.5 * (1.0 - f) * range.width,
        width: f * range.width,
        circular: false,
    }
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Slot order for `count` siblings: entry `s` is the index of the child
/// placed in slot `s`.
pub fn permute_siblings(count: usize, strategy: Permutation, node: NodeId) -> Vec<usize> {
    let mut order: Vec<usize> = (0..count).collect();
    match strategy {
        Permutation::None => {}
        Permutation::Interleave => {
            let half = count.div_ceil(2);
            order = (0..count)
                .map(|s| if s % 2 == 0 { s / 2 } else { half + s / 2 })
                .collect();
        }
        Permutation::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(node.index() as u64)));
            order.shuffle(&mut rng);
        }
    }
    order
}

pub fn interpolation_factor(h: &Hierarchy, node: &TreeNode, mode: InterpolationMode) -> f64 {
    match mode {
        InterpolationMode::Global => {
            if h.max_depth() == 0 {
                0.0
            } else {
                node.depth as f64 / h.max_depth() as f64
            }
        }
        InterpolationMode::Local => {
            let span = node.depth + node.height;
            if span == 0 {
                0.0
            } else {
                node.depth as f64 / span as f64
            }
        }
    }
}

/// Color assigned to one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub path: String,
    pub depth: usize,
    pub factor: f64,
    /// Nominal hue on the virtual circle.
    pub hue: f64,
    /// Hue after mapping around excluded slices.
    pub actual_hue: f64,
    pub chroma: f64,
    pub luminance: f64,
    pub hex: String,
    pub in_gamut: bool,
    pub clamped_hex: String,
    pub clamped_chroma: f64,
    pub clamp_distance: f64,
    /// Unshrunk sub-range handed to the node by its parent's split.
    pub slot_start: f64,
    pub slot_width: f64,
    /// The slot after shrinking; equals the slot for the root.
    pub range_start: f64,
    pub range_width: f64,
}

impl PaletteEntry {
    pub fn hcl(&self) -> HclColor {
        HclColor {
            h: self.actual_hue,
            c: self.chroma,
            l: self.luminance,
        }
    }

    pub fn clamped_hcl(&self) -> HclColor {
        HclColor {
            c: self.clamped_chroma,
            ..self.hcl()
        }
    }

    pub fn slot(&self) -> HueRange {
        HueRange {
            start: self.slot_start,
            width: self.slot_width,
            circular: false,
        }
    }

    pub fn range(&self) -> HueRange {
        HueRange {
            start: self.range_start,
            width: self.range_width,
            circular: false,
        }
    }
}

/// One entry per hierarchy node, in pre-order, plus the generating config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteAssignment {
    pub config: PaletteConfig,
    pub nodes: Vec<PaletteEntry>,
}

impl PaletteAssignment {
    pub fn entry(&self, path: &str) -> Option<&PaletteEntry> {
        self.nodes.iter().find(|e| e.path == path)
    }

    /// Entries indexed by node id. Fails unless every node has exactly one
    /// entry and every entry names a node.
    pub fn aligned(&self, h: &Hierarchy) -> Result<Vec<&PaletteEntry>, String> {
        if self.nodes.len() != h.len() {
            return Err(format!("{} palette entries for {} nodes", self.nodes.len(), h.len()));
        }
        let mut slots: Vec<Option<&PaletteEntry>> = vec![None; h.len()];
        for e in &self.nodes {
            let id = h.lookup(&e.path).ok_or_else(|| format!("unknown path {:?}", e.path))?;
            if slots[id.index()].replace(e).is_some() {
                return Err(format!("duplicate path {:?}", e.path));
            }
        }
        Ok(slots.into_iter().flatten().collect())
    }

    /// Length of the virtual hue circle.
    pub fn hue_modulus(&self) -> f64 {
        self.config
            .exclusions()
            .map(|e| e.allowed_measure())
            .unwrap_or(360.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("palette serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn assign_colors(h: &Hierarchy, cfg: &PaletteConfig) -> Result<PaletteAssignment, PaletteError> {
    if h.len() > MAX_NODES {
        return Err(HierarchyError::TooLarge { limit: MAX_NODES }.into());
    }
    if h.max_depth() > MAX_DEPTH {
        return Err(HierarchyError::TooDeep { limit: MAX_DEPTH }.into());
    }
    cfg.validate()?;
    let exclusions = cfg.exclusions()?;
    let root_range = cfg.virtual_root_range()?;
    let modulus = exclusions.allowed_measure();

    let mut slots = vec![root_range; h.len()];
    let mut ranges = vec![root_range; h.len()];
    // pre-order ids guarantee every parent is visited before its children
    for node in h.nodes() {
        if node.is_leaf() {
            continue;
        }
        let base = if node.id == NodeId::ROOT || cfg.recurse_on_shrunk_range {
            ranges[node.id.index()]
        } else {
            slots[node.id.index()]
        };
        let order = permute_siblings(node.children.len(), cfg.permute, node.id);
        let placed: Vec<&TreeNode> = order.iter().map(|&i| h.node(node.children[i])).collect();
        for (child, slot) in placed.iter().zip(split_hue_range(base, &placed, cfg.split_mode, cfg.weight)) {
            slots[child.id.index()] = slot;
            ranges[child.id.index()] = shrink_range(slot, cfg.hue_fraction);
        }
    }

    let nodes = h
        .nodes()
        .iter()
        .map(|node| {
            let slot = slots[node.id.index()];
            let range = ranges[node.id.index()];
            let mut hue = range.center().rem_euclid(modulus);
            if hue >= modulus {
                hue = 0.0;
            }
            let factor = interpolation_factor(h, node, cfg.interpolation_mode);
            let color = HclColor {
                h: normalize_degrees(exclusions.map(hue)),
                c: cfg.chroma_at(factor),
                l: cfg.luminance_at(factor),
            };
            let (srgb, _) = hcl_to_srgb(color);
            let gamut = check_gamut(color);
            let (clamped, _) = hcl_to_srgb(gamut.clamped);
            let slot = slot.normalized(modulus);
            let range = range.normalized(modulus);
            PaletteEntry {
                path: node.path.clone(),
                depth: node.depth,
                factor,
                hue,
                actual_hue: color.h,
                chroma: color.c,
                luminance: color.l,
                hex: srgb.to_hex(),
                in_gamut: gamut.in_gamut,
                clamped_hex: clamped.to_hex(),
                clamped_chroma: gamut.clamped.c,
                clamp_distance: gamut.clamp_distance,
                slot_start: slot.start,
                slot_width: slot.width,
                range_start: range.start,
                range_width: range.width,
            }
        })
        .collect();
    Ok(PaletteAssignment {
        config: cfg.clone(),
        nodes,
    })
}
