//! Quality scores for a palette, one family per design rule: order,
//! discriminative power, uniformity, equal visual importance, background
//! sensitivity and device independence.
//!
//! Distances are ΔE*ab on the nominal (unclamped) colors. Pairwise scores are
//! exact over at most [`PAIRWISE_NODE_CAP`] nodes per scope; larger scopes are
//! reduced to a seeded sample of that size and the report is marked `sampled`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::color_space::{hcl_to_lab, LabColor};
use crate::error::MetricsError;
use crate::hierarchy::{DistanceVariant, Hierarchy, NodeId};
use crate::treecolors::{PaletteAssignment, PaletteConfig, PaletteEntry};

pub const PAIRWISE_NODE_CAP: usize = 5_000;
/// Uniformity ranks every pair, so it samples earlier to bound memory.
pub const UNIFORMITY_NODE_CAP: usize = 2_000;
const SAMPLE_SEED: u64 = 0x5eed;

pub fn delta_e(a: &LabColor, b: &LabColor) -> f64 {
    a.distance(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    All,
    Leaves,
    Level(usize),
    WithinSiblings,
    BetweenSubtrees,
}

impl Scope {
    pub fn defaults() -> Vec<Scope> {
        vec![Scope::All, Scope::Leaves, Scope::WithinSiblings, Scope::BetweenSubtrees]
    }

    pub fn parse_list(text: &str) -> Result<Vec<Scope>, MetricsError> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::All => f.write_str("all"),
            Scope::Leaves => f.write_str("leaves"),
            Scope::Level(d) => write!(f, "level:{d}"),
            Scope::WithinSiblings => f.write_str("within_siblings"),
            Scope::BetweenSubtrees => f.write_str("between_subtrees"),
        }
    }
}

impl FromStr for Scope {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "all" => Scope::All,
            "leaves" => Scope::Leaves,
            "within_siblings" => Scope::WithinSiblings,
            "between_subtrees" => Scope::BetweenSubtrees,
            other => {
                let level = other
                    .strip_prefix("level:")
                    .or_else(|| other.strip_prefix("level(").and_then(|r| r.strip_suffix(')')))
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| MetricsError::UnknownScope(s.to_string()))?;
                Scope::Level(level)
            }
        })
    }
}

impl Serialize for Scope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub std_l: f64,
    pub std_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParentChildGap {
    pub parent_child_mean: f64,
    pub non_adjacent_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundContrast {
    pub background_l: f64,
    pub min_delta_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GamutCoverage {
    pub fraction: f64,
    pub max_clamp_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub background_l: f64,
    pub scopes: Vec<Scope>,
    pub distance_variant: DistanceVariant,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            background_l: 100.0,
            scopes: Scope::defaults(),
            distance_variant: DistanceVariant::Max,
        }
    }
}

/// Scores keyed by scope label; `null` where a scope selects too few nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub node_count: usize,
    pub order_violations: usize,
    pub discriminative_power: BTreeMap<String, Option<f64>>,
    pub subtree_gap: Option<f64>,
    pub uniformity: Option<f64>,
    pub uniformity_variant: DistanceVariant,
    pub parent_child_gap: Option<ParentChildGap>,
    pub importance_spread: BTreeMap<String, Option<Spread>>,
    pub background_contrast: BackgroundContrast,
    pub gamut_coverage: GamutCoverage,
    pub sampled: bool,
}

impl MetricReport {
    /// `(metric, scope, value)` rows, in a stable order.
    pub fn rows(&self) -> Vec<(String, String, Option<f64>)> {
        let mut rows = vec![(
            "order_violations".to_string(),
            "all".to_string(),
            Some(self.order_violations as f64),
        )];
        for (scope, v) in &self.discriminative_power {
            rows.push(("discriminative_power".into(), scope.clone(), *v));
        }
        rows.push(("subtree_gap".into(), "between_subtrees".into(), self.subtree_gap));
        rows.push(("uniformity".into(), "all".into(), self.uniformity));
        if let Some(g) = self.parent_child_gap {
            rows.push(("parent_child_mean".into(), "all".into(), Some(g.parent_child_mean)));
            rows.push(("non_adjacent_mean".into(), "all".into(), Some(g.non_adjacent_mean)));
        } else {
            rows.push(("parent_child_mean".into(), "all".into(), None));
            rows.push(("non_adjacent_mean".into(), "all".into(), None));
        }
        for (scope, s) in &self.importance_spread {
            rows.push(("importance_std_l".into(), scope.clone(), s.map(|s| s.std_l)));
            rows.push(("importance_std_c".into(), scope.clone(), s.map(|s| s.std_c)));
        }
        rows.push((
            "background_contrast".into(),
            "all".into(),
            Some(self.background_contrast.min_delta_l),
        ));
        rows.push(("gamut_fraction".into(), "all".into(), Some(self.gamut_coverage.fraction)));
        rows.push((
            "max_clamp_distance".into(),
            "all".into(),
            Some(self.gamut_coverage.max_clamp_distance),
        ));
        rows
    }
}

/// White behind palettes that lighten toward the root, black otherwise.
pub fn default_background_l(cfg: &PaletteConfig) -> f64 {
    let [top, leaf] = cfg.luminance_interval;
    if top >= leaf {
        100.0
    } else {
        0.0
    }
}

pub fn gamut_coverage(p: &PaletteAssignment) -> GamutCoverage {
    let n = p.nodes.len();
    if n == 0 {
        return GamutCoverage {
            fraction: 1.0,
            max_clamp_distance: 0.0,
        };
    }
    let inside = p.nodes.iter().filter(|e| e.in_gamut).count();
    GamutCoverage {
        fraction: inside as f64 / n as f64,
        max_clamp_distance: p.nodes.iter().map(|e| e.clamp_distance).fold(0.0, f64::max),
    }
}

pub fn background_contrast(p: &PaletteAssignment, background_l: f64) -> Result<f64, MetricsError> {
    if !(0.0..=100.0).contains(&background_l) {
        return Err(MetricsError::Background(background_l));
    }
    Ok(p.nodes
        .iter()
        .map(|e| (e.luminance - background_l).abs())
        .fold(f64::INFINITY, f64::min))
}

/// Palette joined to its hierarchy, indexed by node id.
pub struct Evaluation<'a> {
    hierarchy: &'a Hierarchy,
    palette: &'a PaletteAssignment,
    entries: Vec<&'a PaletteEntry>,
    lab: Vec<LabColor>,
}

impl<'a> Evaluation<'a> {
    pub fn new(hierarchy: &'a Hierarchy, palette: &'a PaletteAssignment) -> Result<Self, MetricsError> {
        let entries = palette.aligned(hierarchy).map_err(MetricsError::Coverage)?;
        let lab = entries.iter().map(|e| hcl_to_lab(e.hcl())).collect();
        Ok(Self {
            hierarchy,
            palette,
            entries,
            lab,
        })
    }

    pub fn entry(&self, id: NodeId) -> &PaletteEntry {
        self.entries[id.index()]
    }

    pub fn lab(&self, id: NodeId) -> LabColor {
        self.lab[id.index()]
    }

    fn de(&self, a: NodeId, b: NodeId) -> f64 {
        self.de2(a, b).sqrt()
    }

    /// Squared ΔE; cheaper when only the ordering matters.
    fn de2(&self, a: NodeId, b: NodeId) -> f64 {
        let (p, q) = (&self.lab[a.index()], &self.lab[b.index()]);
        let (dl, da, db) = (p.l - q.l, p.a - q.a, p.b - q.b);
        dl * dl + da * da + db * db
    }

    fn all_ids(&self) -> Vec<NodeId> {
        (0..self.hierarchy.len()).map(NodeId).collect()
    }

    fn scope_nodes(&self, scope: Scope) -> Result<Vec<NodeId>, MetricsError> {
        let h = self.hierarchy;
        Ok(match scope {
            Scope::All => self.all_ids(),
            Scope::Leaves => h.leaves().map(|n| n.id).collect(),
            Scope::Level(d) => {
                if d > h.max_depth() {
                    return Err(MetricsError::LevelOutOfRange {
                        level: d,
                        max_depth: h.max_depth(),
                    });
                }
                h.nodes().iter().filter(|n| n.depth == d).map(|n| n.id).collect()
            }
            Scope::WithinSiblings | Scope::BetweenSubtrees => {
                h.nodes().iter().filter(|n| n.depth > 0).map(|n| n.id).collect()
            }
        })
    }

    fn sibling_groups(&self) -> Vec<Vec<NodeId>> {
        self.hierarchy
            .nodes()
            .iter()
            .filter(|n| !n.is_leaf())
            .map(|n| n.children.clone())
            .collect()
    }

    fn too_small(scope: Scope) -> MetricsError {
        MetricsError::ScopeTooSmall {
            scope: scope.to_string(),
            needed: 2,
        }
    }

    fn min_pairwise(&self, ids: &[NodeId]) -> Option<f64> {
        let ids = sample(ids, PAIRWISE_NODE_CAP);
        let mut best = f64::INFINITY;
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                best = best.min(self.de2(a, b));
            }
        }
        (ids.len() >= 2).then(|| best.sqrt())
    }

    /// Minimum ΔE among the children of `parent`; `None` with fewer than two.
    pub fn sibling_group_min_delta_e(&self, parent: NodeId) -> Option<f64> {
        self.min_pairwise(&self.hierarchy.node(parent).children)
    }

    /// Minimum pairwise ΔE over the nodes the scope selects.
    pub fn discriminative_power(&self, scope: Scope) -> Result<f64, MetricsError> {
        match scope {
            Scope::WithinSiblings => self
                .sibling_groups()
                .iter()
                .filter_map(|g| self.min_pairwise(g))
                .reduce(f64::min)
                .ok_or_else(|| Self::too_small(scope)),
            Scope::BetweenSubtrees => {
                let ids = sample(&self.scope_nodes(scope)?, PAIRWISE_NODE_CAP);
                let top: Vec<Option<NodeId>> =
                    ids.iter().map(|&id| self.hierarchy.top_level_ancestor(id)).collect();
                let mut best = f64::INFINITY;
                for i in 0..ids.len() {
                    for j in i + 1..ids.len() {
                        if top[i] != top[j] {
                            best = best.min(self.de2(ids[i], ids[j]));
                        }
                    }
                }
                if best.is_finite() {
                    Ok(best.sqrt())
                } else {
                    Err(Self::too_small(scope))
                }
            }
            _ => self
                .min_pairwise(&self.scope_nodes(scope)?)
                .ok_or_else(|| Self::too_small(scope)),
        }
    }

    /// Smallest nominal-hue gap between the shrunk ranges of adjacent
    /// depth-1 nodes; wraps around when the root owns the full circle.
    pub fn subtree_gap(&self) -> Option<f64> {
        let modulus = self.palette.hue_modulus();
        let root = self.entry(NodeId::ROOT);
        let circular = (root.slot_width - modulus).abs() < 1e-9;
        let mut ranges: Vec<(f64, f64)> = self
            .hierarchy
            .children(NodeId::ROOT)
            .map(|n| {
                let e = self.entry(n.id);
                // unwrap relative to the root start so ranges sort by position
                let start = (e.range_start - root.slot_start).rem_euclid(modulus);
                (start, start + e.range_width)
            })
            .collect();
        if ranges.len() < 2 {
            return None;
        }
        ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut gaps: Vec<f64> = ranges.windows(2).map(|w| w[1].0 - w[0].1).collect();
        if circular {
            let (first, last) = (ranges[0], ranges[ranges.len() - 1]);
            gaps.push(first.0 + modulus - last.1);
        }
        gaps.into_iter().reduce(f64::min)
    }

    /// Spearman rank correlation between pairwise ΔE and tree distance.
    /// `Ok(None)` when either side is constant.
    pub fn uniformity(&self, variant: DistanceVariant) -> Result<Option<f64>, MetricsError> {
        if self.hierarchy.len() < 3 {
            return Err(MetricsError::ScopeTooSmall {
                scope: Scope::All.to_string(),
                needed: 3,
            });
        }
        let ids = sample(&self.all_ids(), UNIFORMITY_NODE_CAP);
        let mut color = Vec::with_capacity(ids.len() * ids.len() / 2);
        let mut tree = Vec::with_capacity(color.capacity());
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                color.push(self.de(a, b));
                let d = self
                    .hierarchy
                    .tree_distance_with(a, b, variant)
                    .expect("ids come from the hierarchy");
                tree.push(d);
            }
        }
        Ok(pearson(&average_ranks(&color), &count_ranks(&tree)))
    }

    /// Parent→child edges where luminance or chroma does not move strictly
    /// from the top value toward the leaf value. Degenerate intervals are
    /// exempt from their check.
    pub fn order_violations(&self, cfg: &PaletteConfig) -> usize {
        let direction = |[top, leaf]: [f64; 2]| (leaf - top).signum() * f64::from(u8::from(top != leaf));
        let dl = direction(cfg.luminance_interval);
        let dc = direction(cfg.chroma_interval);
        self.hierarchy
            .nodes()
            .iter()
            .filter_map(|n| n.parent.map(|p| (self.entry(p), self.entry(n.id))))
            .filter(|(parent, child)| {
                let bad_l = dl != 0.0 && (child.luminance - parent.luminance) * dl <= 0.0;
                let bad_c = dc != 0.0 && (child.chroma - parent.chroma) * dc <= 0.0;
                bad_l || bad_c
            })
            .count()
    }

    /// Mean ΔE over parent-child pairs against the mean over all other pairs.
    pub fn parent_child_gap(&self) -> Option<ParentChildGap> {
        let h = self.hierarchy;
        let edges: Vec<(NodeId, NodeId)> = h
            .nodes()
            .iter()
            .filter_map(|n| n.parent.map(|p| (p, n.id)))
            .collect();
        if edges.is_empty() {
            return None;
        }
        let parent_child_mean = edges.iter().map(|&(p, c)| self.de(p, c)).sum::<f64>() / edges.len() as f64;
        let ids = sample(&self.all_ids(), PAIRWISE_NODE_CAP);
        let mut sum = 0.0;
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                sum += self.de(a, b);
            }
        }
        // take the edges back out rather than testing adjacency per pair
        let mut in_sample = vec![ids.len() == h.len(); h.len()];
        for &id in &ids {
            in_sample[id.index()] = true;
        }
        let mut count = ids.len() * ids.len().saturating_sub(1) / 2;
        for &(p, c) in &edges {
            if in_sample[p.index()] && in_sample[c.index()] {
                sum -= self.de(p, c);
                count -= 1;
            }
        }
        (count > 0).then(|| ParentChildGap {
            parent_child_mean,
            non_adjacent_mean: sum / count as f64,
        })
    }

    /// Population standard deviation of luminance and chroma. Within sibling
    /// groups the result is the largest per-group value.
    pub fn importance_spread(&self, scope: Scope) -> Result<Spread, MetricsError> {
        let spread_of = |ids: &[NodeId]| {
            let l: Vec<f64> = ids.iter().map(|&i| self.entry(i).luminance).collect();
            let c: Vec<f64> = ids.iter().map(|&i| self.entry(i).chroma).collect();
            Spread {
                std_l: population_std(&l),
                std_c: population_std(&c),
            }
        };
        let empty = || MetricsError::ScopeTooSmall {
            scope: scope.to_string(),
            needed: 1,
        };
        if scope == Scope::WithinSiblings {
            return self
                .sibling_groups()
                .iter()
                .map(|g| spread_of(g))
                .reduce(|a, b| Spread {
                    std_l: a.std_l.max(b.std_l),
                    std_c: a.std_c.max(b.std_c),
                })
                .ok_or_else(empty);
        }
        let ids = self.scope_nodes(scope)?;
        if ids.is_empty() {
            return Err(empty());
        }
        Ok(spread_of(&ids))
    }

    pub fn background_contrast(&self, background_l: f64) -> Result<f64, MetricsError> {
        background_contrast(self.palette, background_l)
    }

    pub fn gamut_coverage(&self) -> GamutCoverage {
        gamut_coverage(self.palette)
    }

    pub fn report(&self, opts: &ReportOptions) -> Result<MetricReport, MetricsError> {
        let mut dp = BTreeMap::new();
        let mut spread = BTreeMap::new();
        for &scope in &opts.scopes {
            if let Scope::Level(level) = scope {
                if level > self.hierarchy.max_depth() {
                    return Err(MetricsError::LevelOutOfRange {
                        level,
                        max_depth: self.hierarchy.max_depth(),
                    });
                }
            }
            dp.insert(scope.to_string(), self.discriminative_power(scope).ok());
            spread.insert(scope.to_string(), self.importance_spread(scope).ok());
        }
        Ok(MetricReport {
            node_count: self.hierarchy.len(),
            order_violations: self.order_violations(&self.palette.config),
            discriminative_power: dp,
            subtree_gap: self.subtree_gap(),
            uniformity: self.uniformity(opts.distance_variant).ok().flatten(),
            uniformity_variant: opts.distance_variant,
            parent_child_gap: self.parent_child_gap(),
            importance_spread: spread,
            background_contrast: BackgroundContrast {
                background_l: opts.background_l,
                min_delta_l: self.background_contrast(opts.background_l)?,
            },
            gamut_coverage: self.gamut_coverage(),
            sampled: self.hierarchy.len() > UNIFORMITY_NODE_CAP,
        })
    }
}

/// Full report for a palette over its hierarchy.
pub fn evaluate(h: &Hierarchy, p: &PaletteAssignment, opts: &ReportOptions) -> Result<MetricReport, MetricsError> {
    Evaluation::new(h, p)?.report(opts)
}

fn sample(ids: &[NodeId], cap: usize) -> Vec<NodeId> {
    if ids.len() <= cap {
        return ids.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut picked: Vec<NodeId> = ids.choose_multiple(&mut rng, cap).copied().collect();
    picked.sort();
    picked
}

fn population_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Ranks starting at 1, ties sharing their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<(f64, u32)> = values.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && order[j + 1].0 == order[i].0 {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &(_, k) in &order[i..=j] {
            ranks[k as usize] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// [`average_ranks`] for small integers, by counting.
fn count_ranks(values: &[usize]) -> Vec<f64> {
    let top = values.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; top + 1];
    for &v in values {
        counts[v] += 1;
    }
    let mut rank_of = vec![0.0; top + 1];
    let mut below = 0;
    for (v, &n) in counts.iter().enumerate() {
        if n > 0 {
            rank_of[v] = below as f64 + (n as f64 + 1.0) / 2.0;
        }
        below += n;
    }
    values.iter().map(|&v| rank_of[v]).collect()
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    pearson(&average_ranks(x), &average_ranks(y))
}
