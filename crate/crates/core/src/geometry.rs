//! Localization geometry: measurement Jacobians, Fisher information, CRLB
//! traces, cluster coverage radii, and the grid-traversal expected-CRLB field.
//!
//! Coordinates are metric: `x`, `y` horizontal, `z` depth positive downward.
//! Anchors sit on the seafloor below the target, so direction-cosine rows
//! always have a nonnegative vertical component.

use nalgebra::{Dyn, Matrix3, OMatrix, Vector3, U3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{los_variance, RangeErrorParams, SoundSpeedProfile};

/// Condition-number limit beyond which a FIM is treated as singular.
pub const FIM_CONDITION_LIMIT: f64 = 1e12;

/// Rows of measurement direction cosines, one per anchor.
pub type JacobianMatrix = OMatrix<f64, Dyn, U3>;

/// A seafloor beacon with known position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorPosition {
    pub x: f64,
    pub y: f64,
    /// Depth, positive down, >= 0.
    pub z: f64,
}

impl AnchorPosition {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(z >= 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bad anchor position ({x}, {y}, {z})"
            )));
        }
        Ok(Self { x, y, z })
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

/// One anchor cluster: a ring of `n_anchors` beacons around `center` on the
/// seafloor, sized so that the ring is seen from the cluster center (at the
/// design target depth) under the design elevation angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTopology {
    pub center: (f64, f64),
    pub anchor_depth_m: f64,
    pub target_design_depth_m: f64,
    pub n_anchors: usize,
    pub ring_radius_m: f64,
    pub design_elevation_rad: f64,
    pub anchors: Vec<AnchorPosition>,
}

impl ClusterTopology {
    /// Ring with radius derived from the design elevation:
    /// `ring_radius = (anchor_depth - target_depth) / tan(design_elevation)`.
    pub fn ring(
        center: (f64, f64),
        anchor_depth_m: f64,
        target_design_depth_m: f64,
        n_anchors: usize,
        design_elevation_rad: f64,
    ) -> Result<Self> {
        if !(design_elevation_rad > 0.0 && design_elevation_rad <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidAngle(design_elevation_rad));
        }
        let dz = anchor_depth_m - target_design_depth_m;
        if !(dz > 0.0) || target_design_depth_m < 0.0 {
            return Err(Error::InvalidInput(format!(
                "anchor depth {anchor_depth_m} m must exceed target depth {target_design_depth_m} m"
            )));
        }
        let ring_radius_m = if design_elevation_rad == std::f64::consts::FRAC_PI_2 {
            0.0
        } else {
            dz / design_elevation_rad.tan()
        };
        Self::with_ring_radius(
            center,
            anchor_depth_m,
            target_design_depth_m,
            n_anchors,
            ring_radius_m,
            design_elevation_rad,
        )
    }

    /// Ring with an explicit radius (zero collapses all anchors onto the center).
    pub fn with_ring_radius(
        center: (f64, f64),
        anchor_depth_m: f64,
        target_design_depth_m: f64,
        n_anchors: usize,
        ring_radius_m: f64,
        design_elevation_rad: f64,
    ) -> Result<Self> {
        if n_anchors == 0 {
            return Err(Error::TooFewAnchors { needed: 1, got: 0 });
        }
        if !(ring_radius_m >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "negative ring radius {ring_radius_m}"
            )));
        }
        let anchors = (0..n_anchors)
            .map(|j| {
                let azimuth = 2.0 * std::f64::consts::PI * j as f64 / n_anchors as f64;
                AnchorPosition {
                    x: center.0 + ring_radius_m * azimuth.cos(),
                    y: center.1 + ring_radius_m * azimuth.sin(),
                    z: anchor_depth_m,
                }
            })
            .collect();
        Ok(Self {
            center,
            anchor_depth_m,
            target_design_depth_m,
            n_anchors,
            ring_radius_m,
            design_elevation_rad,
            anchors,
        })
    }

    /// Same ring translated to a new center.
    pub fn at_center(&self, center: (f64, f64)) -> Self {
        let mut moved = self.clone();
        let dx = center.0 - self.center.0;
        let dy = center.1 - self.center.1;
        moved.center = center;
        for a in &mut moved.anchors {
            a.x += dx;
            a.y += dy;
        }
        moved
    }
}

/// Diagonal range-measurement covariance, one variance per anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementCovariance {
    variances: Vec<f64>,
}

impl MeasurementCovariance {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() || variances.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidInput(
                "measurement variances must be nonempty and strictly positive".into(),
            ));
        }
        Ok(Self { variances })
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn len(&self) -> usize {
        self.variances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variances.is_empty()
    }
}

/// Elevation in `[0, pi/2]` and azimuth in `(-pi, pi]` from `target` to `anchor`.
pub fn elevation_azimuth(target: &Vector3<f64>, anchor: &AnchorPosition) -> Result<(f64, f64)> {
    let dx = anchor.x - target.x;
    let dy = anchor.y - target.y;
    let dz = anchor.z - target.z;
    let dist = (dx * dx + dy * dy + dz * dz).sqrt();
    if dist == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let elevation = (dz.abs() / dist).clamp(0.0, 1.0).asin();
    let azimuth = dy.atan2(dx);
    Ok((elevation, azimuth))
}

/// Direction-cosine rows `[cos(a)cos(b), cos(a)sin(b), sin(a)]` from the target
/// toward each anchor. Each row is a unit vector.
pub fn jacobian(target: &Vector3<f64>, anchors: &[AnchorPosition]) -> Result<JacobianMatrix> {
    if anchors.is_empty() {
        return Err(Error::InvalidInput(
            "jacobian needs at least one anchor".into(),
        ));
    }
    let mut rows = Vec::with_capacity(anchors.len() * 3);
    for anchor in anchors {
        let dx = anchor.x - target.x;
        let dy = anchor.y - target.y;
        let dz = anchor.z - target.z;
        let dist = (dx * dx + dy * dy + dz * dz).sqrt();
        if dist == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        rows.extend_from_slice(&[dx / dist, dy / dist, dz.abs() / dist]);
    }
    Ok(JacobianMatrix::from_row_slice(&rows))
}

/// Fisher information `J^T C^-1 J` for a diagonal covariance.
pub fn fim(jac: &JacobianMatrix, cov: &MeasurementCovariance) -> Result<Matrix3<f64>> {
    let rows = jac.nrows();
    if cov.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            got: cov.len(),
        });
    }
    let mut phi = Matrix3::zeros();
    for (j, &var) in cov.variances().iter().enumerate() {
        let row = jac.row(j);
        let w = 1.0 / var;
        for r in 0..3 {
            for c in 0..3 {
                phi[(r, c)] += w * row[r] * row[c];
            }
        }
    }
    Ok(phi)
}

fn inf_norm(m: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|r| (0..3).map(|c| m[(r, c)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Cofactor inverse of a 3x3 matrix with a condition-number guard.
fn invert3(m: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let c00 = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    let c01 = m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)];
    let c02 = m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)];
    let det = m[(0, 0)] * c00 - m[(0, 1)] * c01 + m[(0, 2)] * c02;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::SingularFim {
            cond: f64::INFINITY,
        });
    }
    let c10 = m[(0, 1)] * m[(2, 2)] - m[(0, 2)] * m[(2, 1)];
    let c11 = m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)];
    let c12 = m[(0, 0)] * m[(2, 1)] - m[(0, 1)] * m[(2, 0)];
    let c20 = m[(0, 1)] * m[(1, 2)] - m[(0, 2)] * m[(1, 1)];
    let c21 = m[(0, 0)] * m[(1, 2)] - m[(0, 2)] * m[(1, 0)];
    let c22 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let inv = Matrix3::new(
        c00 / det,
        -c10 / det,
        c20 / det,
        -c01 / det,
        c11 / det,
        -c21 / det,
        c02 / det,
        -c12 / det,
        c22 / det,
    );
    let cond = inf_norm(m) * inf_norm(&inv);
    if !cond.is_finite() || cond > FIM_CONDITION_LIMIT {
        return Err(Error::SingularFim { cond });
    }
    Ok(inv)
}

/// Trace of the inverse FIM (A-optimality position error bound, m²).
pub fn crlb_trace(fim: &Matrix3<f64>) -> Result<f64> {
    Ok(invert3(fim)?.trace())
}

/// Closed-form center CRLB of a symmetric ring:
/// `4 sigma_d^2 / (N cos^2 a) + sigma_d^2 / (N sin^2 a)`.
pub fn center_crlb(n_anchors: usize, elevation: f64, sigma_d_sq: f64) -> Result<f64> {
    if n_anchors < 3 {
        return Err(Error::TooFewAnchors {
            needed: 3,
            got: n_anchors,
        });
    }
    if !(elevation > 0.0 && elevation < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidAngle(elevation));
    }
    if !(sigma_d_sq >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "negative variance {sigma_d_sq}"
        )));
    }
    let n = n_anchors as f64;
    let cos_sq = elevation.cos().powi(2);
    let sin_sq = elevation.sin().powi(2);
    Ok(4.0 * sigma_d_sq / (n * cos_sq) + sigma_d_sq / (n * sin_sq))
}

/// Which anchors must be within slant communication range for a point to
/// count as covered by the cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoverageRule {
    /// At least 3 anchors in range (the minimum for 3-D trilateration).
    #[default]
    AtLeastThree,
    /// Every anchor of the cluster in range.
    AllAnchors,
}

/// What "coverage radius" measures. Service-radius conventions differ, so
/// both readings are provided: the largest fully-covered disc (the
/// conservative default used for plan layout) and the maximum service extent
/// (how far from the center the rule still holds in the best direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSemantics {
    /// Radius of the largest disc about the center covered in every direction.
    #[default]
    LargestCoveredDisc,
    /// Largest center distance at which the rule still holds in some direction.
    MaxServiceExtent,
}

/// Communication range plus the rule deciding coverage membership.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageSpec {
    pub comm_range_m: f64,
    pub rule: CoverageRule,
}

impl CoverageSpec {
    pub fn new(comm_range_m: f64, rule: CoverageRule) -> Result<Self> {
        if !(comm_range_m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "communication range must be positive, got {comm_range_m}"
            )));
        }
        Ok(Self { comm_range_m, rule })
    }

    /// Indices of the cluster's anchors within slant range of `(x, y, depth)`.
    pub fn anchors_in_range(
        &self,
        cluster: &ClusterTopology,
        x: f64,
        y: f64,
        depth_m: f64,
    ) -> Vec<usize> {
        let r_sq = self.comm_range_m * self.comm_range_m;
        cluster
            .anchors
            .iter()
            .enumerate()
            .filter(|(_, a)| {
                let dx = a.x - x;
                let dy = a.y - y;
                let dz = a.z - depth_m;
                dx * dx + dy * dy + dz * dz <= r_sq
            })
            .map(|(i, _)| i)
            .collect()
    }

    fn required(&self, cluster: &ClusterTopology) -> usize {
        match self.rule {
            CoverageRule::AtLeastThree => 3,
            CoverageRule::AllAnchors => cluster.n_anchors,
        }
    }

    pub fn covers(&self, cluster: &ClusterTopology, x: f64, y: f64, depth_m: f64) -> bool {
        let r_sq = self.comm_range_m * self.comm_range_m;
        let mut hits = 0usize;
        let needed = self.required(cluster);
        for a in &cluster.anchors {
            let dx = a.x - x;
            let dy = a.y - y;
            let dz = a.z - depth_m;
            if dx * dx + dy * dy + dz * dz <= r_sq {
                hits += 1;
                if hits >= needed {
                    return true;
                }
            }
        }
        false
    }
}

const COVERAGE_DIRECTIONS: usize = 720;
const COVERAGE_MARCH_STEPS: usize = 1024;
const COVERAGE_BISECT_TOL_M: f64 = 1e-3;

/// Coverage radius of a cluster at its design target depth under the default
/// largest-covered-disc semantics.
pub fn coverage_radius(
    cluster: &ClusterTopology,
    comm_range_m: f64,
    rule: CoverageRule,
) -> Result<f64> {
    coverage_radius_with(
        cluster,
        comm_range_m,
        rule,
        RadiusSemantics::LargestCoveredDisc,
    )
}

/// Coverage radius with explicit semantics. Angular scan over 720 directions
/// with a per-direction coarse march plus bisection of the rule boundary.
pub fn coverage_radius_with(
    cluster: &ClusterTopology,
    comm_range_m: f64,
    rule: CoverageRule,
    semantics: RadiusSemantics,
) -> Result<f64> {
    let spec = CoverageSpec::new(comm_range_m, rule)?;
    let depth = cluster.target_design_depth_m;
    let (cx, cy) = cluster.center;
    if !spec.covers(cluster, cx, cy, depth) {
        return Err(Error::NoCoverage);
    }
    let dz = cluster.anchor_depth_m - depth;
    let horizontal_reach = (comm_range_m * comm_range_m - dz * dz).max(0.0).sqrt();
    // Beyond ring_radius + horizontal_reach no anchor can be in range.
    let r_upper = cluster.ring_radius_m + horizontal_reach + 1.0;

    let radius_along = |theta: f64| -> f64 {
        let (sin_t, cos_t) = theta.sin_cos();
        let covered_at = |r: f64| spec.covers(cluster, cx + r * cos_t, cy + r * sin_t, depth);
        let step = r_upper / COVERAGE_MARCH_STEPS as f64;
        match semantics {
            RadiusSemantics::LargestCoveredDisc => {
                // First radius where the rule fails; covered at r = 0 by the
                // center check above, uncovered at r_upper by construction.
                let mut lo = 0.0;
                let mut hi = r_upper;
                for i in 1..=COVERAGE_MARCH_STEPS {
                    let r = i as f64 * step;
                    if covered_at(r) {
                        lo = r;
                    } else {
                        hi = r;
                        break;
                    }
                }
                while hi - lo > COVERAGE_BISECT_TOL_M {
                    let mid = 0.5 * (lo + hi);
                    if covered_at(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
            RadiusSemantics::MaxServiceExtent => {
                // Last covered radius on the march grid, then bisect the
                // trailing boundary.
                let mut last_covered = 0.0;
                for i in 1..=COVERAGE_MARCH_STEPS {
                    let r = i as f64 * step;
                    if covered_at(r) {
                        last_covered = r;
                    }
                }
                let mut lo = last_covered;
                let mut hi = (last_covered + step).min(r_upper);
                while hi - lo > COVERAGE_BISECT_TOL_M {
                    let mid = 0.5 * (lo + hi);
                    if covered_at(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    };

    let radii: Vec<f64> = (0..COVERAGE_DIRECTIONS)
        .map(|k| radius_along(2.0 * std::f64::consts::PI * k as f64 / COVERAGE_DIRECTIONS as f64))
        .collect();
    let radius = match semantics {
        RadiusSemantics::LargestCoveredDisc => radii.iter().cloned().fold(f64::INFINITY, f64::min),
        RadiusSemantics::MaxServiceExtent => radii.iter().cloned().fold(0.0, f64::max),
    };
    Ok(radius)
}

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Region {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        if !(x_max >= x_min && y_max >= y_min) {
            return Err(Error::InvalidInput(format!(
                "empty region [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn square_around(center: (f64, f64), half_side_m: f64) -> Result<Self> {
        Self::new(
            center.0 - half_side_m,
            center.1 - half_side_m,
            center.0 + half_side_m,
            center.1 + half_side_m,
        )
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// One traversal cell: center coordinates and the CRLB trace when covered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCell {
    pub x_m: f64,
    pub y_m: f64,
    /// `None` when the cell fails the coverage rule.
    pub crlb_m2: Option<f64>,
}

/// Grid of expected-CRLB values over a region at the design target depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrlbField {
    pub origin: (f64, f64),
    pub step_m: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major cells, x fastest.
    pub cells: Vec<FieldCell>,
    /// Mean CRLB over covered cells (the traversal expectation Q).
    pub q_m2: f64,
    pub covered_cells: usize,
}

impl CrlbField {
    /// Write `x_m,y_m,crlb_m2,covered` rows in deterministic cell order.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x_m,y_m,crlb_m2,covered")?;
        for cell in &self.cells {
            match cell.crlb_m2 {
                Some(v) => writeln!(w, "{},{},{},1", cell.x_m, cell.y_m, v)?,
                None => writeln!(w, "{},{},nan,0", cell.x_m, cell.y_m)?,
            }
        }
        Ok(())
    }
}

/// CRLB trace at a single point served by the cluster's in-range anchors.
///
/// Per-anchor variances come from the refraction formula evaluated at each
/// anchor's elevation angle; only anchors within slant communication range
/// contribute measurements.
pub fn point_crlb(
    cluster: &ClusterTopology,
    profile: &SoundSpeedProfile,
    params: &RangeErrorParams,
    spec: &CoverageSpec,
    x: f64,
    y: f64,
    depth_m: f64,
) -> Result<f64> {
    let in_range = spec.anchors_in_range(cluster, x, y, depth_m);
    if in_range.len() < spec.required(cluster) {
        return Err(Error::NoCoverage);
    }
    let anchors: Vec<AnchorPosition> = in_range.iter().map(|&i| cluster.anchors[i]).collect();
    let target = Vector3::new(x, y, depth_m);
    let mut variances = Vec::with_capacity(anchors.len());
    for anchor in &anchors {
        let (elevation, _) = elevation_azimuth(&target, anchor)?;
        variances.push(los_variance(profile, elevation, params)?);
    }
    let cov = MeasurementCovariance::new(variances)?;
    let jac = jacobian(&target, &anchors)?;
    crlb_trace(&fim(&jac, &cov)?)
}

/// Traverse the region on a `step_m` grid (cell centers), computing the CRLB
/// trace on covered cells and the traversal expectation Q over them.
///
/// Cells are evaluated as an order-independent parallel map; the mean is taken
/// over the deterministic cell enumeration, so parallel and serial runs agree
/// bit for bit.
pub fn expected_crlb_field(
    cluster: &ClusterTopology,
    profile: &SoundSpeedProfile,
    params: &RangeErrorParams,
    region: &Region,
    step_m: f64,
    spec: &CoverageSpec,
) -> Result<CrlbField> {
    if !(step_m > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {step_m}"
        )));
    }
    let width = region.x_max - region.x_min;
    let height = region.y_max - region.y_min;
    let nx = ((width / step_m).ceil() as usize).max(1);
    let ny = ((height / step_m).ceil() as usize).max(1);
    let depth = cluster.target_design_depth_m;

    let cells: Vec<FieldCell> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| -> Result<FieldCell> {
            let ix = idx % nx;
            let iy = idx / nx;
            let x = region.x_min + (ix as f64 + 0.5) * step_m;
            let y = region.y_min + (iy as f64 + 0.5) * step_m;
            if !spec.covers(cluster, x, y, depth) {
                return Ok(FieldCell {
                    x_m: x,
                    y_m: y,
                    crlb_m2: None,
                });
            }
            let value = point_crlb(cluster, profile, params, spec, x, y, depth)?;
            Ok(FieldCell {
                x_m: x,
                y_m: y,
                crlb_m2: Some(value),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sum = 0.0;
    let mut covered = 0usize;
    for cell in &cells {
        if let Some(v) = cell.crlb_m2 {
            sum += v;
            covered += 1;
        }
    }
    if covered == 0 {
        return Err(Error::NoCoverage);
    }
    Ok(CrlbField {
        origin: (region.x_min, region.y_min),
        step_m,
        nx,
        ny,
        cells,
        q_m2: sum / covered as f64,
        covered_cells: covered,
    })
}
