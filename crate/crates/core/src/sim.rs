//! Seeded Monte Carlo traversal of a deployment plan: straight-line legs with
//! exponentially diverging dead-reckoning variance between clusters, and
//! instantaneous CRLB-level error while inside acoustic coverage.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deploy::DeploymentPlan;
use crate::error::{Error, Result};
use crate::geometry::{center_crlb, point_crlb, ClusterTopology, CoverageSpec};
use crate::ins::{InsDivergenceModel, LegSampling};
use crate::planner::design_sigma_d_sq;
use crate::profile::{RangeErrorParams, SoundSpeedProfile};

/// Which paths a trial samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PathSelector {
    /// Row crossing through the middle cluster row.
    R1,
    /// Column crossing through the middle cluster column.
    R2,
    /// Corner-to-corner diagonal through the diagonal clusters.
    R3,
    /// Uniform random left-edge start to right-edge destination.
    #[default]
    Random,
}

impl PathSelector {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathSelector::R1 => "r1",
            PathSelector::R2 => "r2",
            PathSelector::R3 => "r3",
            PathSelector::Random => "random",
        }
    }
}

/// Path request: endpoints are derived from the plan for `r1`/`r2`/`r3` and
/// drawn from the trial seed for `random`; explicit endpoints override both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub kind: PathSelector,
    pub start: Option<(f64, f64)>,
    pub dest: Option<(f64, f64)>,
    pub depth_m: f64,
}

impl PathSpec {
    pub fn of_kind(kind: PathSelector, depth_m: f64) -> Self {
        Self {
            kind,
            start: None,
            dest: None,
            depth_m,
        }
    }
}

/// How a sample decides it is inside acoustic coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoverageMembership {
    /// Within the plan's coverage radius `d_com` of a cluster center. This is
    /// the disc abstraction the layout and the scaling law are built on.
    #[default]
    DiscRadius,
    /// The coverage rule evaluated against the cluster's anchors.
    AnchorRule,
}

/// Error variance reported while inside coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FixValue {
    /// CRLB trace of the in-range anchors at the sample point.
    #[default]
    LocalCrlb,
    /// The cluster-center closed form (the scaling law's approximation).
    CenterClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SimOptions {
    pub membership: CoverageMembership,
    pub fix_value: FixValue,
}

/// Plan geometry plus the acoustic context needed to evaluate fixes.
#[derive(Debug, Clone)]
pub struct SimScenario<'a> {
    pub plan: &'a DeploymentPlan,
    pub clusters: &'a [ClusterTopology],
    /// Slab profile spanning the sailing depth down to the anchor depth.
    pub profile: &'a SoundSpeedProfile,
    pub params: RangeErrorParams,
    pub coverage: CoverageSpec,
    pub options: SimOptions,
}

/// One sample along the voyage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub s_m: f64,
    pub error_var_m2: f64,
    pub in_coverage: bool,
}

/// Per-trial output: ordered samples and their mean error variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub per_sample: Vec<SampleRecord>,
    pub mean_error_var_m2: f64,
    pub trial_seed: u64,
    pub start: (f64, f64),
    pub dest: (f64, f64),
}

/// Summary statistics over a Monte Carlo batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub master_seed: u64,
}

/// Per-trial seed derivation: splitmix64 of `master_seed XOR trial`.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    let mut z = (master_seed ^ trial).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Liang-Barsky test that the segment overlaps the `[0, side] x [0, side]` square.
fn segment_intersects_square(start: (f64, f64), dest: (f64, f64), side: f64) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let dx = dest.0 - start.0;
    let dy = dest.1 - start.1;
    for (p, q) in [
        (-dx, start.0),
        (dx, side - start.0),
        (-dy, start.1),
        (dy, side - start.1),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

fn resolve_endpoints(
    plan: &DeploymentPlan,
    path: &PathSpec,
    seed: u64,
) -> Result<((f64, f64), (f64, f64))> {
    if let (Some(start), Some(dest)) = (path.start, path.dest) {
        if start == dest {
            return Err(Error::InvalidInput("path start equals destination".into()));
        }
        if !segment_intersects_square(start, dest, plan.side_m) {
            return Err(Error::PathOutsideRegion);
        }
        return Ok((start, dest));
    }
    let side = plan.side_m;
    let d_c = plan.d_c_m;
    let mid = (plan.per_axis / 2) as f64;
    match path.kind {
        PathSelector::R1 => {
            let y = (mid + 0.5) * d_c;
            Ok(((0.0, y), (side, y)))
        }
        PathSelector::R2 => {
            let x = (mid + 0.5) * d_c;
            Ok(((x, 0.0), (x, side)))
        }
        PathSelector::R3 => Ok(((0.0, 0.0), (side, side))),
        PathSelector::Random => {
            // Opposite-edge crossing: left edge to right edge.
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let y_start = rng.random_range(0.0..side);
            let y_dest = rng.random_range(0.0..side);
            Ok(((0.0, y_start), (side, y_dest)))
        }
    }
}

/// Simulate one voyage. Deterministic given `(scenario, path, model, leg, seed)`;
/// the seed only feeds the endpoint draw for `random` paths.
///
/// Between coverage samples the error variance is the summed per-axis drift
/// at the displacement accumulated since the last fix; axes with no
/// progression along the path accrue nothing. Every covered sample resets the
/// drift odometer.
pub fn simulate_path(
    scenario: &SimScenario<'_>,
    path: &PathSpec,
    model: &InsDivergenceModel,
    leg: &LegSampling,
    seed: u64,
) -> Result<SimulationReport> {
    let plan = scenario.plan;
    if scenario.clusters.len() != plan.cluster_centers.len() {
        return Err(Error::InvalidInput(format!(
            "{} cluster geometries for {} plan centers",
            scenario.clusters.len(),
            plan.cluster_centers.len()
        )));
    }
    if !(path.depth_m >= 0.0)
        || scenario
            .clusters
            .first()
            .is_some_and(|c| path.depth_m >= c.anchor_depth_m)
    {
        return Err(Error::InvalidInput(format!(
            "bad sailing depth {}",
            path.depth_m
        )));
    }
    let (start, dest) = resolve_endpoints(plan, path, seed)?;
    let length = ((dest.0 - start.0).powi(2) + (dest.1 - start.1).powi(2)).sqrt();
    let ux = (dest.0 - start.0) / length;
    let uy = (dest.1 - start.1) / length;
    let x_active = ux.abs() > 1e-12;
    let y_active = uy.abs() > 1e-12;

    let step = leg.step_m();
    let samples = ((length / step).floor() as usize).max(1);

    // Precompute the pinned fix value once when requested.
    let pinned_value = match scenario.options.fix_value {
        FixValue::CenterClosedForm => {
            let design_elevation = scenario
                .clusters
                .first()
                .map(|c| c.design_elevation_rad)
                .ok_or_else(|| Error::InvalidInput("plan has no clusters".into()))?;
            let sigma = design_sigma_d_sq(scenario.profile, design_elevation, &scenario.params)?;
            Some(center_crlb(plan.per_cluster, design_elevation, sigma)?)
        }
        FixValue::LocalCrlb => None,
    };

    let covering_value = |x: f64, y: f64| -> Result<Option<f64>> {
        let mut best: Option<f64> = None;
        for cluster in scenario.clusters {
            let inside = match scenario.options.membership {
                CoverageMembership::DiscRadius => {
                    let dx = x - cluster.center.0;
                    let dy = y - cluster.center.1;
                    dx * dx + dy * dy <= plan.d_com_m * plan.d_com_m
                }
                CoverageMembership::AnchorRule => {
                    scenario.coverage.covers(cluster, x, y, path.depth_m)
                }
            };
            if !inside {
                continue;
            }
            let value = match pinned_value {
                Some(v) => v,
                None => point_crlb(
                    cluster,
                    scenario.profile,
                    &scenario.params,
                    &scenario.coverage,
                    x,
                    y,
                    path.depth_m,
                )?,
            };
            best = Some(match best {
                Some(current) => current.min(value),
                None => value,
            });
        }
        Ok(best)
    };

    let mut per_sample = Vec::with_capacity(samples);
    let mut fix_pos = start;
    let mut sum = 0.0;
    for n in 1..=samples {
        let s = n as f64 * step;
        let x = start.0 + s * ux;
        let y = start.1 + s * uy;
        let (error_var, in_coverage) = match covering_value(x, y)? {
            Some(v) => {
                fix_pos = (x, y);
                (v, true)
            }
            None => {
                let mut var = 0.0;
                if x_active {
                    var += model.position_variance((x - fix_pos.0).abs());
                }
                if y_active {
                    var += model.position_variance((y - fix_pos.1).abs());
                }
                if !var.is_finite() {
                    return Err(Error::Diverged);
                }
                (var, false)
            }
        };
        sum += error_var;
        per_sample.push(SampleRecord {
            s_m: s,
            error_var_m2: error_var,
            in_coverage,
        });
    }

    Ok(SimulationReport {
        mean_error_var_m2: sum / per_sample.len() as f64,
        per_sample,
        trial_seed: seed,
        start,
        dest,
    })
}

/// Run `trials` independent voyages with per-trial seeds derived from the
/// master seed. Trials execute as an order-preserving parallel map, so
/// parallel and serial runs produce identical reports.
pub fn monte_carlo(
    scenario: &SimScenario<'_>,
    kind: PathSelector,
    depth_m: f64,
    trials: usize,
    model: &InsDivergenceModel,
    leg: &LegSampling,
    master_seed: u64,
) -> Result<(Vec<SimulationReport>, McSummary)> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    let reports: Vec<SimulationReport> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(master_seed, t as u64);
            let path = PathSpec::of_kind(kind, depth_m);
            simulate_path(scenario, &path, model, leg, seed)
        })
        .collect::<Result<Vec<_>>>()?;

    let n = reports.len() as f64;
    let mean = reports.iter().map(|r| r.mean_error_var_m2).sum::<f64>() / n;
    let var = if reports.len() > 1 {
        reports
            .iter()
            .map(|r| (r.mean_error_var_m2 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    let min = reports
        .iter()
        .map(|r| r.mean_error_var_m2)
        .fold(f64::INFINITY, f64::min);
    let max = reports
        .iter()
        .map(|r| r.mean_error_var_m2)
        .fold(f64::NEG_INFINITY, f64::max);
    let summary = McSummary {
        trials: reports.len(),
        mean,
        std: var.sqrt(),
        min,
        max,
        master_seed,
    };
    Ok((reports, summary))
}
