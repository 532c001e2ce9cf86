//! Layered sound-speed profiles and the refraction-aware variance of a
//! line-of-sight range measurement.
//!
//! Acoustic rays between a shallow target and a seafloor anchor bend at layer
//! boundaries (Snell's law). When the per-layer timing error is proportional
//! to the path length inside the layer, the LOS range error variance is a sum
//! over layers below the target:
//!
//! ```text
//! sigma_d^2 = sum_{i=2..I}  gamma^2 s_{i-1}^2 / (s_1^2 - s_{i-1}^2 cos^2 alpha)
//! ```
//!
//! where `s_1` is the sound speed in the target's layer and `alpha` the
//! elevation (grazing) angle of the ray. A single-layer profile yields zero
//! variance (empty sum).

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth-ordered sound-speed table. Layer index 1 is the target's layer; the
/// index grows downward toward the anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundSpeedProfile {
    /// `(depth_m, speed_mps)` pairs, depths strictly increasing.
    layers: Vec<(f64, f64)>,
}

impl SoundSpeedProfile {
    pub fn new(layers: Vec<(f64, f64)>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidInput("profile needs at least 1 layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidInput(format!(
                    "profile depths must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for &(depth, speed) in &layers {
            if !(speed > 0.0) || !depth.is_finite() || depth < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "bad profile row: depth {depth} m, speed {speed} m/s"
                )));
            }
        }
        Ok(Self { layers })
    }

    /// Constant 1500 m/s water column.
    pub fn iso1500() -> Self {
        Self {
            layers: vec![(0.0, 1500.0), (6000.0, 1500.0)],
        }
    }

    /// Two-segment synthetic profile with a sound channel axis at 1000 m:
    /// speed falls 1520 -> 1480 m/s over the first kilometer, then rises to
    /// 1540 m/s at 4000 m.
    pub fn default_munk_like() -> Self {
        Self {
            layers: vec![(0.0, 1520.0), (1000.0, 1480.0), (4000.0, 1540.0)],
        }
    }

    /// Look up a built-in profile by name (`iso1500`, `default-munk-like`).
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "iso1500" => Ok(Self::iso1500()),
            "default-munk-like" => Ok(Self::default_munk_like()),
            other => Err(Error::InvalidInput(format!(
                "unknown built-in profile \"{other}\" (expected \"iso1500\" or \"default-munk-like\")"
            ))),
        }
    }

    /// Parse a `depth_m,speed_mps` CSV.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        {
            let headers = csv.headers()?;
            if headers.len() < 2 || &headers[0] != "depth_m" || &headers[1] != "speed_mps" {
                return Err(Error::InvalidInput(format!(
                    "profile CSV must start with header depth_m,speed_mps (got {:?})",
                    headers.iter().collect::<Vec<_>>()
                )));
            }
        }
        let mut layers = Vec::new();
        for row in csv.records() {
            let row = row?;
            let depth: f64 = row
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad depth in profile row {row:?}")))?;
            let speed: f64 = row
                .get(1)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad speed in profile row {row:?}")))?;
            layers.push((depth, speed));
        }
        Self::new(layers)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())?;
        Self::from_csv_reader(file)
    }

    pub fn layers(&self) -> &[(f64, f64)] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Piecewise-linear sound speed at `depth_m`, clamped to the table ends.
    pub fn speed_at(&self, depth_m: f64) -> f64 {
        let layers = &self.layers;
        if depth_m <= layers[0].0 {
            return layers[0].1;
        }
        if depth_m >= layers[layers.len() - 1].0 {
            return layers[layers.len() - 1].1;
        }
        let hi = layers.partition_point(|&(d, _)| d <= depth_m);
        let (d0, s0) = layers[hi - 1];
        let (d1, s1) = layers[hi];
        let t = (depth_m - d0) / (d1 - d0);
        s0 + t * (s1 - s0)
    }

    /// Resample onto the slab `[target_depth_m, anchor_depth_m]` with uniform
    /// layer thickness at most `layer_thickness_m`. The first resampled layer
    /// sits at the target depth, which makes the result directly usable by
    /// [`los_variance`].
    pub fn resample_slab(
        &self,
        target_depth_m: f64,
        anchor_depth_m: f64,
        layer_thickness_m: f64,
    ) -> Result<SoundSpeedProfile> {
        if !(layer_thickness_m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "layer thickness must be positive, got {layer_thickness_m}"
            )));
        }
        if !(anchor_depth_m >= target_depth_m) || target_depth_m < 0.0 {
            return Err(Error::InvalidInput(format!(
                "bad slab bounds: target {target_depth_m} m, anchor {anchor_depth_m} m"
            )));
        }
        let span = anchor_depth_m - target_depth_m;
        if span == 0.0 {
            return SoundSpeedProfile::new(vec![(target_depth_m, self.speed_at(target_depth_m))]);
        }
        let n = (span / layer_thickness_m).ceil().max(1.0) as usize;
        let h = span / n as f64;
        let layers = (0..=n)
            .map(|k| {
                let z = target_depth_m + k as f64 * h;
                (z, self.speed_at(z))
            })
            .collect();
        SoundSpeedProfile::new(layers)
    }
}

/// Scale factor of the distance-proportional timing error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeErrorParams {
    /// Standard deviation of the per-layer path measurement error as a
    /// fraction of the path length (dimensionless, > 0).
    pub gamma: f64,
}

impl RangeErrorParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma must be > 0, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }
}

fn validate_elevation(elevation: f64) -> Result<()> {
    if !(elevation > 0.0 && elevation <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidAngle(elevation));
    }
    Ok(())
}

/// Per-layer contributions to the LOS range variance, in layer order
/// (1-based layer `i` of the sum maps to element `i - 2`).
///
/// The reflection guard checks every layer speed against the Snell limit
/// `cos(alpha) < s_1 / s_i`; a ray that cannot physically reach the deepest
/// layer is rejected even though `s_I` never enters the sum itself.
pub fn los_variance_terms(
    profile: &SoundSpeedProfile,
    elevation: f64,
    params: &RangeErrorParams,
) -> Result<Vec<f64>> {
    validate_elevation(elevation)?;
    let speeds: Vec<f64> = profile.layers().iter().map(|&(_, s)| s).collect();
    let count = speeds.len();
    if count < 2 {
        return Ok(Vec::new());
    }
    let s1 = speeds[0];
    let cos_sq = elevation.cos().powi(2);
    for (idx, &s) in speeds.iter().enumerate().skip(1) {
        if s1 * s1 - s * s * cos_sq <= 0.0 {
            return Err(Error::TotalReflection { layer: idx + 1 });
        }
    }
    let gamma_sq = params.gamma * params.gamma;
    let terms = (1..count)
        .map(|idx| {
            let s_prev = speeds[idx - 1];
            gamma_sq * s_prev * s_prev / (s1 * s1 - s_prev * s_prev * cos_sq)
        })
        .collect();
    Ok(terms)
}

/// Variance of the refraction-corrected LOS range measurement, in m².
///
/// `elevation` must lie in `(0, pi/2]`; errors with [`Error::TotalReflection`]
/// when any layer speed violates the Snell penetration limit.
pub fn los_variance(
    profile: &SoundSpeedProfile,
    elevation: f64,
    params: &RangeErrorParams,
) -> Result<f64> {
    Ok(los_variance_terms(profile, elevation, params)?.iter().sum())
}
