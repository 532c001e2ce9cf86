//! Cluster layout on a uniform grid over a square region, derived spacings,
//! the stable-navigation margin, and the maximum serviceable region side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ins::InsDivergenceModel;

/// A laid-out deployment: grid of cluster centers plus every derived spacing.
///
/// `d_h` is the pure-navigation gap between adjacent coverage discs
/// (`d_c - 2 d_com`, negative when coverage overlaps); `d_h1` is the
/// stable-navigation gap `(side - 2 d_com N_ch) / (N_ch + 1)` used by the
/// feasibility condition and the scaling law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeploymentPlan {
    pub side_km: f64,
    pub side_m: f64,
    pub n_total: usize,
    pub per_cluster: usize,
    pub n_clusters: usize,
    pub per_axis: usize,
    /// `per_axis * per_axis` centers, row-major (x fastest), meters.
    pub cluster_centers: Vec<(f64, f64)>,
    pub d_c_m: f64,
    pub d_com_m: f64,
    pub d_h_m: f64,
    pub d_h1_m: f64,
    /// `n_total mod per_cluster` anchors that fill no cluster.
    pub leftover_anchors: usize,
    /// Whole clusters dropped by the square-grid floor (`n_clusters - per_axis^2`).
    pub unplaced_clusters: usize,
}

fn isqrt(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Place `floor(n_total / per_cluster)` clusters on the largest square grid
/// that fits, centered in the region with equal margins.
pub fn layout_clusters(
    side_km: f64,
    n_total: usize,
    per_cluster: usize,
    d_com_m: f64,
) -> Result<DeploymentPlan> {
    if per_cluster < 3 {
        return Err(Error::TooFewAnchors {
            needed: 3,
            got: per_cluster,
        });
    }
    if n_total < per_cluster {
        return Err(Error::TooFewAnchors {
            needed: per_cluster,
            got: n_total,
        });
    }
    if !(side_km > 0.0) || !(d_com_m > 0.0) {
        return Err(Error::InvalidInput(format!(
            "side {side_km} km and coverage radius {d_com_m} m must be positive"
        )));
    }
    let side_m = side_km * 1000.0;
    let n_clusters = n_total / per_cluster;
    let per_axis = isqrt(n_clusters);
    debug_assert!(per_axis >= 1);
    let d_c_m = side_m / per_axis as f64;
    // Equal margins: with d_c = side / per_axis the leading offset is d_c / 2.
    let margin = (side_m - per_axis as f64 * d_c_m) / 2.0;
    let mut cluster_centers = Vec::with_capacity(per_axis * per_axis);
    for iy in 0..per_axis {
        for ix in 0..per_axis {
            cluster_centers.push((
                margin + (ix as f64 + 0.5) * d_c_m,
                margin + (iy as f64 + 0.5) * d_c_m,
            ));
        }
    }
    let nch = per_axis as f64;
    let d_h1_m = (side_m - 2.0 * d_com_m * nch) / (nch + 1.0);
    Ok(DeploymentPlan {
        side_km,
        side_m,
        n_total,
        per_cluster,
        n_clusters,
        per_axis,
        cluster_centers,
        d_c_m,
        d_com_m,
        d_h_m: d_c_m - 2.0 * d_com_m,
        d_h1_m,
        leftover_anchors: n_total % per_cluster,
        unplaced_clusters: n_clusters - per_axis * per_axis,
    })
}

/// Left-hand side of the stable-navigation condition:
///
/// ```text
/// f = d_com^2 - d_com^4 / (d_com + d_h1)^2 - (beta1 + 1) e^{beta2 d_h1} - 2 sigma0^2
/// ```
///
/// Positive means the AUV reaches the neighbor cluster with high probability:
/// the first two terms bound (via the right-triangle geometry of a vehicle
/// aiming at a coverage disc of radius `d_com` from `d_h1` away) the squared
/// lateral deviation the disc can absorb, and the last two are the drift
/// variance accumulated over the gap plus the initial uncertainty on both
/// horizontal axes. `beta2` is applied through the model's distance-unit
/// scale. Note `f(0) = -(beta1 + 1) - 2 sigma0^2 < 0: the condition is
/// infeasible at zero gap by construction, so the feasible gap set is an
/// interval bounded away from zero.
pub fn stable_navigation_margin(d_com_m: f64, d_h1_m: f64, model: &InsDivergenceModel) -> f64 {
    let reach = d_com_m + d_h1_m;
    let exponent = model.beta2 * d_h1_m / model.distance_unit_m;
    d_com_m * d_com_m
        - d_com_m.powi(4) / (reach * reach)
        - (model.beta1 + 1.0) * exponent.exp()
        - 2.0 * model.sigma0_sq
}

/// Outcome of the maximum-coverage-side search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SideOutcome {
    Feasible { side_km: f64, d_h1_m: f64 },
    Infeasible,
}

const SIDE_SCAN_STEPS: usize = 1000;
const SIDE_BISECT_TOL_M: f64 = 0.1;

/// Largest region side (km) whose stable-navigation margin stays positive,
/// searched over the gap `d_h1`: coarse scan then bisection of the upper
/// feasibility boundary.
///
/// The margin is unimodal in `d_h1` (its derivative is a strictly decreasing
/// function), so the feasible set is a single interval and the upper boundary
/// is well defined.
pub fn max_coverage_side(
    n_total: usize,
    per_cluster: usize,
    d_com_m: f64,
    model: &InsDivergenceModel,
) -> Result<SideOutcome> {
    if per_cluster < 3 {
        return Err(Error::TooFewAnchors {
            needed: 3,
            got: per_cluster,
        });
    }
    if n_total < per_cluster {
        return Err(Error::TooFewAnchors {
            needed: per_cluster,
            got: n_total,
        });
    }
    if !(d_com_m > 0.0) {
        return Err(Error::InvalidInput(format!(
            "coverage radius must be positive, got {d_com_m}"
        )));
    }
    let n_clusters = n_total / per_cluster;
    let per_axis = isqrt(n_clusters) as f64;

    if model.beta2 == 0.0 {
        // Exponential term is constant; the margin rises monotonically toward
        // d_com^2 - (beta1 + 1) - 2 sigma0^2.
        let limit = d_com_m * d_com_m - (model.beta1 + 1.0) - 2.0 * model.sigma0_sq;
        if limit > 0.0 {
            return Err(Error::UnboundedSide);
        }
        return Ok(SideOutcome::Infeasible);
    }

    // Beyond d_star the exponential alone exceeds d_com^2, so the margin is
    // certainly negative.
    let ratio = d_com_m * d_com_m / (model.beta1 + 1.0);
    if ratio <= 1.0 {
        return Ok(SideOutcome::Infeasible);
    }
    let d_star = model.distance_unit_m / model.beta2 * ratio.ln();

    let mut best_positive: Option<f64> = None;
    let step = d_star / SIDE_SCAN_STEPS as f64;
    for i in 0..=SIDE_SCAN_STEPS {
        let d = i as f64 * step;
        if stable_navigation_margin(d_com_m, d, model) > 0.0 {
            best_positive = Some(d);
        }
    }
    let Some(mut lo) = best_positive else {
        return Ok(SideOutcome::Infeasible);
    };
    let mut hi = (lo + step).min(d_star.max(lo + step));
    // Ensure the bracket's upper end is nonpositive.
    while stable_navigation_margin(d_com_m, hi, model) > 0.0 {
        lo = hi;
        hi += step.max(1.0);
    }
    while hi - lo > SIDE_BISECT_TOL_M {
        let mid = 0.5 * (lo + hi);
        if stable_navigation_margin(d_com_m, mid, model) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d_h1 = 0.5 * (lo + hi);
    let side_m = 2.0 * d_com_m * per_axis + d_h1 * (per_axis + 1.0);
    Ok(SideOutcome::Feasible {
        side_km: side_m / 1000.0,
        d_h1_m: d_h1,
    })
}
