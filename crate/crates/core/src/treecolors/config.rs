use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Arc of hue angles `[start, start + width)`.
///
/// Ranges produced while subdividing a wrapping parent keep an unwrapped
/// `start` (it may exceed the hue modulus); use [`HueRange::normalized`]
/// before reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RangeRepr", into = "RangeRepr")]
pub struct HueRange {
    pub start: f64,
    pub width: f64,
    /// Set only for a full circle, whose first and last sub-ranges are adjacent.
    pub circular: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeRepr {
    start: f64,
    width: f64,
}

impl From<RangeRepr> for HueRange {
    fn from(r: RangeRepr) -> Self {
        Self {
            start: r.start,
            width: r.width,
            circular: r.width >= 360.0,
        }
    }
}

impl From<HueRange> for RangeRepr {
    fn from(r: HueRange) -> Self {
        Self {
            start: r.start,
            width: r.width,
        }
    }
}

impl Default for HueRange {
    fn default() -> Self {
        Self::full()
    }
}

impl HueRange {
    pub fn full() -> Self {
        Self {
            start: 0.0,
            width: 360.0,
            circular: true,
        }
    }

    pub fn new(start: f64, width: f64) -> Result<Self, ConfigError> {
        if !(width > 0.0 && width <= 360.0) || !start.is_finite() {
            return Err(ConfigError::RangeWidth(width));
        }
        Ok(Self {
            start: start.rem_euclid(360.0),
            width,
            circular: width >= 360.0,
        })
    }

    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn center(&self) -> f64 {
        self.start + 0.5 * self.width
    }

    pub fn normalized(&self, modulus: f64) -> Self {
        let mut start = self.start.rem_euclid(modulus);
        if start >= modulus {
            start = 0.0;
        }
        Self { start, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    #[default]
    Even,
    Proportional,
}

/// Sub-tree size used by proportional splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeWeight {
    #[default]
    LeafCount,
    NodeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Permutation {
    None,
    /// Middle-out interleave: `[0, ⌈k/2⌉, 1, ⌈k/2⌉ + 1, ...]`.
    #[default]
    Interleave,
    /// Fisher-Yates shuffle seeded per node from `(seed, node id)`.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationMode {
    /// `depth / max_depth` over the whole tree.
    #[default]
    Global,
    /// `depth / (depth + height)` per branch; every leaf reaches 1.
    Local,
}

/// Every knob of the palette engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaletteConfig {
    pub hue_range: HueRange,
    pub hue_fraction: f64,
    pub split_mode: SplitMode,
    pub weight: SizeWeight,
    pub permute: Permutation,
    pub interpolation_mode: InterpolationMode,
    /// `[top, leaf]` luminance.
    pub luminance_interval: [f64; 2],
    /// `[top, leaf]` chroma.
    pub chroma_interval: [f64; 2],
    /// `[start, end)` arcs in degrees; `start > end` wraps through 0.
    pub excluded_slices: Vec<[f64; 2]>,
    pub recurse_on_shrunk_range: bool,
}

impl Default for PaletteConfig {
    fn default() -> Self {
        Self {
            hue_range: HueRange::full(),
            hue_fraction: 0.9,
            split_mode: SplitMode::Even,
            weight: SizeWeight::LeafCount,
            permute: Permutation::Interleave,
            interpolation_mode: InterpolationMode::Global,
            luminance_interval: [95.0, 57.0],
            chroma_interval: [10.0, 45.0],
            excluded_slices: Vec::new(),
            recurse_on_shrunk_range: true,
        }
    }
}

impl PaletteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.hue_fraction > 0.0 && self.hue_fraction <= 1.0) {
            return Err(ConfigError::HueFraction(self.hue_fraction));
        }
        HueRange::new(self.hue_range.start, self.hue_range.width)?;
        for value in self.luminance_interval {
            if !(0.0..=100.0).contains(&value) {
                return Err(ConfigError::Interval {
                    name: "luminance",
                    value,
                });
            }
        }
        for value in self.chroma_interval {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ConfigError::Interval {
                    name: "chroma",
                    value,
                });
            }
        }
        self.virtual_root_range()?;
        Ok(())
    }

    pub fn exclusions(&self) -> Result<HueExclusions, ConfigError> {
        HueExclusions::new(&self.excluded_slices)
    }

    /// Root range on the virtual hue circle left after exclusions. A full
    /// circle shrinks to the allowed measure; partial ranges are taken as
    /// virtual degrees and must fit.
    pub fn virtual_root_range(&self) -> Result<HueRange, ConfigError> {
        let available = self.exclusions()?.allowed_measure();
        let range = self.hue_range;
        if range.width >= 360.0 {
            return Ok(HueRange {
                start: range.start.rem_euclid(available),
                width: available,
                circular: true,
            });
        }
        if range.width > available {
            return Err(ConfigError::RangeExceedsAllowed {
                width: range.width,
                available,
            });
        }
        Ok(HueRange {
            start: range.start.rem_euclid(available),
            width: range.width,
            circular: false,
        })
    }

    /// Luminance at an interpolation factor; exact at both endpoints.
    pub fn luminance_at(&self, factor: f64) -> f64 {
        lerp(self.luminance_interval, factor)
    }

    pub fn chroma_at(&self, factor: f64) -> f64 {
        lerp(self.chroma_interval, factor)
    }
}

fn lerp([top, leaf]: [f64; 2], t: f64) -> f64 {
    top * (1.0 - t) + leaf * t
}

/// Excluded hue slices, stored as sorted, merged, non-wrapping segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HueExclusions {
    segments: Vec<(f64, f64)>,
}

/// Largest total exclusion accepted, exclusive.
pub const MAX_EXCLUDED_DEGREES: f64 = 180.0;

impl HueExclusions {
    pub fn new(slices: &[[f64; 2]]) -> Result<Self, ConfigError> {
        let mut segments = Vec::new();
        for &[start, end] in slices {
            let valid = (0.0..360.0).contains(&start) && (0.0..=360.0).contains(&end) && start != end;
            if !valid {
                return Err(ConfigError::BadSlice { start, end });
            }
            if start < end {
                segments.push((start, end));
            } else {
                segments.push((start, 360.0));
                if end > 0.0 {
                    segments.push((0.0, end));
                }
            }
        }
        segments.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segments.len());
        for seg in segments {
            match merged.last_mut() {
                Some(last) if seg.0 < last.1 => return Err(ConfigError::OverlappingSlices),
                Some(last) if seg.0 == last.1 => last.1 = seg.1,
                _ => merged.push(seg),
            }
        }
        let out = Self { segments: merged };
        let total = out.excluded_measure();
        if total >= MAX_EXCLUDED_DEGREES {
            return Err(ConfigError::TooMuchExcluded(total));
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn excluded_measure(&self) -> f64 {
        self.segments.iter().map(|(s, e)| e - s).sum()
    }

    pub fn allowed_measure(&self) -> f64 {
        360.0 - self.excluded_measure()
    }

    pub fn contains(&self, hue: f64) -> bool {
        self.segments.iter().any(|&(s, e)| hue >= s && hue < e)
    }

    /// Maps a virtual hue in `[0, allowed_measure)` onto the allowed arcs,
    /// preserving order and skipping forward over every excluded segment.
    pub fn map(&self, nominal: f64) -> f64 {
        let mut hue = nominal;
        for &(start, end) in &self.segments {
            if hue >= start {
                hue += end - start;
            } else {
                break;
            }
        }
        hue
    }
}

/// Maps a virtual hue onto the circle with `slices` removed.
pub fn map_excluded_hue(nominal: f64, slices: &[[f64; 2]]) -> Result<f64, ConfigError> {
    Ok(HueExclusions::new(slices)?.map(nominal))
}
