use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ColorError {
    #[error("sRGB channel {0} outside [0, 1]")]
    ChannelOutOfRange(f64),
    #[error("lightness {0} outside [0, 100]")]
    LightnessOutOfRange(f64),
    #[error("chroma {0} must be finite and non-negative")]
    NegativeChroma(f64),
    #[error("invalid hex color {0:?}, expected #rrggbb")]
    BadHex(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum HierarchyError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("line {line}: {detail}")]
    BadLine { line: usize, detail: String },
    #[error("duplicate sibling path {0:?}")]
    DuplicateSibling(String),
    #[error("line {line}: root {found:?} differs from {expected:?}")]
    InconsistentRoot {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("line {0}: empty path segment")]
    EmptySegment(usize),
    #[error("empty input")]
    Empty,
    #[error("hierarchy has more than {limit} nodes")]
    TooLarge { limit: usize },
    #[error("hierarchy deeper than {limit}")]
    TooDeep { limit: usize },
    #[error("node {0} does not belong to this hierarchy")]
    ForeignNode(usize),
}

impl HierarchyError {
    /// Size-limit violations as opposed to syntax problems.
    pub fn is_size_limit(&self) -> bool {
        matches!(self, Self::TooLarge { .. } | Self::TooDeep { .. })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("hue_fraction {0} outside (0, 1]")]
    HueFraction(f64),
    #[error("hue range width {0} outside (0, 360]")]
    RangeWidth(f64),
    #[error("{name} interval endpoint {value} out of range")]
    Interval { name: &'static str, value: f64 },
    #[error("excluded slice [{start}, {end}) is invalid")]
    BadSlice { start: f64, end: f64 },
    #[error("excluded slices overlap")]
    OverlappingSlices,
    #[error("excluded hues total {0}°, must be below 180°")]
    TooMuchExcluded(f64),
    #[error("hue range width {width} exceeds the {available}° left after exclusions")]
    RangeExceedsAllowed { width: f64, available: f64 },
    #[error("unknown preset {0:?}, expected theme,size,focus")]
    UnknownPreset(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum PaletteError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("palette does not cover the hierarchy: {0}")]
    Coverage(String),
    #[error("scope {scope} selects fewer than {needed} nodes")]
    ScopeTooSmall { scope: String, needed: usize },
    #[error("level {level} beyond max depth {max_depth}")]
    LevelOutOfRange { level: usize, max_depth: usize },
    #[error("unknown scope {0:?}")]
    UnknownScope(String),
    #[error("background luminance {0} outside [0, 100]")]
    Background(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("render size {0} outside [64, 4096]")]
    Size(u32),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("palette does not match hierarchy: {0}")]
    Mismatch(String),
    #[error("unknown layout {0:?}")]
    UnknownLayout(String),
}
