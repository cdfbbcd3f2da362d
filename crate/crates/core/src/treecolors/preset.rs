//! Recommended configurations by application theme, hierarchy size and
//! analysis focus.
//!
//! The small-hierarchy entries only fix the hue fraction. Their luminance and
//! chroma intervals borrow the larger-hierarchy values and are flagged
//! provisional.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{InterpolationMode, PaletteConfig, SplitMode};
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theme {
    Light,
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HierarchySize {
    Small,
    Larger,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisFocus {
    TopDown,
    BottomUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Preset {
    pub theme: Theme,
    pub size: HierarchySize,
    pub focus: AnalysisFocus,
}

impl Preset {
    pub fn new(theme: Theme, size: HierarchySize, focus: AnalysisFocus) -> Self {
        Self { theme, size, focus }
    }

    /// All eight combinations in a stable order: theme, then size, then focus.
    pub fn all() -> [Preset; 8] {
        let mut out = [Preset::new(Theme::Light, HierarchySize::Small, AnalysisFocus::TopDown); 8];
        let mut i = 0;
        for theme in [Theme::Light, Theme::Dark] {
            for size in [HierarchySize::Small, HierarchySize::Larger] {
                for focus in [AnalysisFocus::TopDown, AnalysisFocus::BottomUp] {
                    out[i] = Preset::new(theme, size, focus);
                    i += 1;
                }
            }
        }
        out
    }

    /// Small presets have no published chroma/luminance intervals.
    pub fn is_provisional(&self) -> bool {
        self.size == HierarchySize::Small
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn config(&self) -> PaletteConfig {
        preset(self.theme, self.size, self.focus)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theme = match self.theme {
            Theme::Light => "light",
            Theme::Dark => "dark",
        };
        let size = match self.size {
            HierarchySize::Small => "small",
            HierarchySize::Larger => "larger",
        };
        let focus = match self.focus {
            AnalysisFocus::TopDown => "top_down",
            AnalysisFocus::BottomUp => "bottom_up",
        };
        write!(f, "{theme},{size},{focus}")
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    /// Parses `theme,size,focus`, e.g. `dark,larger,bottom_up`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ConfigError::UnknownPreset(s.to_string());
        let parts: Vec<String> = s
            .split(',')
            .map(|p| p.trim().to_ascii_lowercase().replace('-', "_"))
            .collect();
        let [theme, size, focus] = parts.as_slice() else {
            return Err(err());
        };
        let theme = match theme.as_str() {
            "light" => Theme::Light,
            "dark" => Theme::Dark,
            _ => return Err(err()),
        };
        let size = match size.as_str() {
            "small" => HierarchySize::Small,
            "larger" | "large" => HierarchySize::Larger,
            _ => return Err(err()),
        };
        let focus = match focus.as_str() {
            "top_down" | "topdown" => AnalysisFocus::TopDown,
            "bottom_up" | "bottomup" => AnalysisFocus::BottomUp,
            _ => return Err(err()),
        };
        Ok(Preset::new(theme, size, focus))
    }
}

pub fn preset(theme: Theme, size: HierarchySize, focus: AnalysisFocus) -> PaletteConfig {
    let (luminance_interval, chroma_interval) = match theme {
        Theme::Light => ([95.0, 57.0], [10.0, 45.0]),
        Theme::Dark => ([26.0, 76.0], [20.0, 59.0]),
    };
    let hue_fraction = match size {
        HierarchySize::Small => 0.75,
        HierarchySize::Larger => 0.9,
    };
    // small hierarchies accept any focus setting; they get the top-down pair
    let (interpolation_mode, split_mode) = match (size, focus) {
        (HierarchySize::Larger, AnalysisFocus::BottomUp) => (InterpolationMode::Local, SplitMode::Proportional),
        _ => (InterpolationMode::Global, SplitMode::Even),
    };
    PaletteConfig {
        hue_fraction,
        split_mode,
        interpolation_mode,
        luminance_interval,
        chroma_interval,
        ..PaletteConfig::default()
    }
}
