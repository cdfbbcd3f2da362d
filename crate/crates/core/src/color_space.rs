//! sRGB, CIELab and HCL (cylindrical Lab) conversions.
//!
//! All conversions use the D65 reference white and the 2° standard observer.
//! The XYZ white point is derived from the rows of the sRGB matrix so that
//! `(1, 1, 1)` lands on `L* = 100, a* = b* = 0` without drift.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::ColorError;

const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

static XYZ_TO_SRGB: LazyLock<[[f64; 3]; 3]> = LazyLock::new(|| invert3(&SRGB_TO_XYZ));

static WHITE: LazyLock<[f64; 3]> = LazyLock::new(|| {
    let m = &SRGB_TO_XYZ;
    [
        m[0][0] + m[0][1] + m[0][2],
        m[1][0] + m[1][1] + m[1][2],
        m[2][0] + m[2][1] + m[2][2],
    ]
});

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

/// Tolerance on linear-light channels when deciding gamut membership.
pub const GAMUT_EPSILON: f64 = 1e-9;
/// Absolute chroma tolerance of the clamp bisection.
pub const CLAMP_TOLERANCE: f64 = 1e-4;
/// Below this chroma the hue is undefined and canonicalized to 0.
pub const ACHROMATIC_CHROMA: f64 = 1e-9;

/// Gamma-encoded sRGB color with channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrgbColor {
    r: f64,
    g: f64,
    b: f64,
}

impl SrgbColor {
    pub fn new(r: f64, g: f64, b: f64) -> Result<Self, ColorError> {
        for v in [r, g, b] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ColorError::ChannelOutOfRange(v));
            }
        }
        Ok(Self { r, g, b })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn channels(&self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    /// Parses `#rrggbb` (case-insensitive).
    pub fn from_hex(text: &str) -> Result<Self, ColorError> {
        let digits = text
            .strip_prefix('#')
            .filter(|d| d.len() == 6 && d.is_ascii())
            .ok_or_else(|| ColorError::BadHex(text.to_string()))?;
        let mut out = [0.0; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let byte = u8::from_str_radix(&digits[2 * i..2 * i + 2], 16)
                .map_err(|_| ColorError::BadHex(text.to_string()))?;
            *slot = f64::from(byte) / 255.0;
        }
        Ok(Self {
            r: out[0],
            g: out[1],
            b: out[2],
        })
    }

    /// Lowercase `#rrggbb`, channels rounded half-up to 8 bits.
    pub fn to_hex(&self) -> String {
        to_hex(*self)
    }
}

impl fmt::Display for SrgbColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// CIELab color. `l` is kept in `[0, 100]`; `a` and `b` are unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub fn new(l: f64, a: f64, b: f64) -> Result<Self, ColorError> {
        if !(0.0..=100.0).contains(&l) || !a.is_finite() || !b.is_finite() {
            return Err(ColorError::LightnessOutOfRange(l));
        }
        Ok(Self { l, a, b })
    }

    /// Euclidean ΔE*ab.
    pub fn distance(&self, other: &LabColor) -> f64 {
        let dl = self.l - other.l;
        let da = self.a - other.a;
        let db = self.b - other.b;
        (dl * dl + da * da + db * db).sqrt()
    }
}

/// Cylindrical Lab: hue in degrees `[0, 360)`, chroma `>= 0`, luminance `[0, 100]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HclColor {
    pub h: f64,
    pub c: f64,
    pub l: f64,
}

impl HclColor {
    /// Builds an HCL color, wrapping the hue into `[0, 360)`.
    pub fn new(h: f64, c: f64, l: f64) -> Result<Self, ColorError> {
        if !h.is_finite() || !(c >= 0.0 && c.is_finite()) {
            return Err(ColorError::NegativeChroma(c));
        }
        if !(0.0..=100.0).contains(&l) {
            return Err(ColorError::LightnessOutOfRange(l));
        }
        Ok(Self {
            h: normalize_degrees(h),
            c,
            l,
        })
    }

    pub fn to_lab(&self) -> LabColor {
        hcl_to_lab(*self)
    }
}

/// Result of testing an HCL color against the sRGB gamut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GamutCheck {
    pub in_gamut: bool,
    /// Max-chroma in-gamut color with the same hue and luminance; the input when in gamut.
    pub clamped: HclColor,
    /// ΔE*ab between input and `clamped`.
    pub clamp_distance: f64,
}

/// Wraps an angle into `[0, 360)`.
pub fn normalize_degrees(h: f64) -> f64 {
    let wrapped = h.rem_euclid(360.0);
    // rem_euclid can round up to the modulus for tiny negative inputs
    if wrapped >= 360.0 {
        0.0
    } else {
        wrapped
    }
}

fn to_linear(v: f64) -> f64 {
    if v <= 0.040_45 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn from_linear(v: f64) -> f64 {
    if v <= 0.003_130_8 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

fn lab_f_inv(t: f64) -> f64 {
    let cube = t * t * t;
    if cube > EPSILON {
        cube
    } else {
        (116.0 * t - 16.0) / KAPPA
    }
}

fn mul3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn invert3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let det = m[0][0] * cof(1, 2, 1, 2) - m[0][1] * cof(1, 2, 0, 2) + m[0][2] * cof(1, 2, 0, 1);
    [
        [cof(1, 2, 1, 2) / det, -cof(0, 2, 1, 2) / det, cof(0, 1, 1, 2) / det],
        [-cof(1, 2, 0, 2) / det, cof(0, 2, 0, 2) / det, -cof(0, 1, 0, 2) / det],
        [cof(1, 2, 0, 1) / det, -cof(0, 2, 0, 1) / det, cof(0, 1, 0, 1) / det],
    ]
}

pub fn srgb_to_lab(c: SrgbColor) -> LabColor {
    let linear = [to_linear(c.r), to_linear(c.g), to_linear(c.b)];
    let xyz = mul3(&SRGB_TO_XYZ, linear);
    let white = *WHITE;
    let fx = lab_f(xyz[0] / white[0]);
    let fy = lab_f(xyz[1] / white[1]);
    let fz = lab_f(xyz[2] / white[2]);
    LabColor {
        l: (116.0 * fy - 16.0).clamp(0.0, 100.0),
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// Linear-light sRGB channels of a Lab color, before any clamping.
pub fn lab_to_linear_rgb(c: LabColor) -> [f64; 3] {
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    let yr = if c.l > KAPPA * EPSILON {
        fy * fy * fy
    } else {
        c.l / KAPPA
    };
    let white = *WHITE;
    let xyz = [lab_f_inv(fx) * white[0], yr * white[1], lab_f_inv(fz) * white[2]];
    mul3(&XYZ_TO_SRGB, xyz)
}

fn linear_in_gamut(linear: &[f64; 3]) -> bool {
    linear
        .iter()
        .all(|&v| (-GAMUT_EPSILON..=1.0 + GAMUT_EPSILON).contains(&v))
}

/// Converts to sRGB, clipping channels into `[0, 1]`. The flag is false when
/// the color had to be clipped.
pub fn lab_to_srgb(c: LabColor) -> (SrgbColor, bool) {
    let linear = lab_to_linear_rgb(c);
    let in_gamut = linear_in_gamut(&linear);
    let [r, g, b] = linear.map(|v| from_linear(v.clamp(0.0, 1.0)).clamp(0.0, 1.0));
    (SrgbColor { r, g, b }, in_gamut)
}

pub fn lab_to_hcl(c: LabColor) -> HclColor {
    let chroma = c.a.hypot(c.b);
    let h = if chroma < ACHROMATIC_CHROMA {
        0.0
    } else {
        normalize_degrees(c.b.atan2(c.a).to_degrees())
    };
    HclColor { h, c: chroma, l: c.l }
}

pub fn hcl_to_lab(c: HclColor) -> LabColor {
    let (sin, cos) = c.h.to_radians().sin_cos();
    LabColor {
        l: c.l,
        a: c.c * cos,
        b: c.c * sin,
    }
}

pub fn hcl_to_srgb(c: HclColor) -> (SrgbColor, bool) {
    lab_to_srgb(hcl_to_lab(c))
}

pub fn in_gamut(c: HclColor) -> bool {
    linear_in_gamut(&lab_to_linear_rgb(hcl_to_lab(c)))
}

/// Tests `c` against sRGB and, when outside, bisects chroma at fixed hue and
/// luminance for the largest in-gamut value.
pub fn check_gamut(c: HclColor) -> GamutCheck {
    if in_gamut(c) {
        return GamutCheck {
            in_gamut: true,
            clamped: c,
            clamp_distance: 0.0,
        };
    }
    // the achromatic axis is in gamut for every l in [0, 100]
    let mut lo = 0.0;
    let mut hi = c.c;
    while hi - lo > CLAMP_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if in_gamut(HclColor { c: mid, ..c }) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let clamped = HclColor { c: lo, ..c };
    GamutCheck {
        in_gamut: false,
        clamped,
        clamp_distance: hcl_to_lab(c).distance(&hcl_to_lab(clamped)),
    }
}

pub fn to_hex(c: SrgbColor) -> String {
    let byte = |v: f64| (v * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", byte(c.r), byte(c.g), byte(c.b))
}
