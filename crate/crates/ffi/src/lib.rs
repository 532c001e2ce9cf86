//! C ABI for the anchorplan planning kernels.
//!
//! Handles are opaque pointers created and destroyed by this library; every
//! function returns an [`ApStatus`] and writes results through out-pointers.
//! All functions are panic-safe: a Rust panic is caught and surfaced as
//! `AP_STATUS_NUMERIC_ERROR` instead of unwinding across the boundary.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use anchorplan::deploy::{
    layout_clusters, max_coverage_side, stable_navigation_margin, DeploymentPlan, SideOutcome,
};
use anchorplan::error::Error;
use anchorplan::geometry::{
    center_crlb, coverage_radius_with, point_crlb, ClusterTopology, CoverageRule, CoverageSpec,
    RadiusSemantics,
};
use anchorplan::ins::{fit_divergence, InsDivergenceModel, LegSampling};
use anchorplan::planner::scaling_law;
use anchorplan::profile::{los_variance, RangeErrorParams, SoundSpeedProfile};
use anchorplan::sim::{monte_carlo, PathSelector, SimOptions, SimScenario};

/// Status code returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8Error = 2,
    InvalidInput = 3,
    NoCoverage = 4,
    Infeasible = 5,
    NumericError = 6,
    IoError = 7,
}

fn status_of(err: &Error) -> ApStatus {
    match err {
        Error::InvalidInput(_)
        | Error::InvalidAngle(_)
        | Error::CoincidentPoints
        | Error::DimensionMismatch { .. }
        | Error::TooFewAnchors { .. }
        | Error::InsufficientData { .. }
        | Error::PathOutsideRegion => ApStatus::InvalidInput,
        Error::NoCoverage => ApStatus::NoCoverage,
        Error::AllInfeasible | Error::NegativeGap { .. } | Error::UnboundedSide => {
            ApStatus::Infeasible
        }
        Error::TotalReflection { .. }
        | Error::SingularFim { .. }
        | Error::Diverged
        | Error::FitDiverged => ApStatus::NumericError,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => ApStatus::IoError,
    }
}

fn guard<F: FnOnce() -> ApStatus>(f: F) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => ApStatus::NumericError,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ap_status_message(status: ApStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        ApStatus::Ok => b"ok\0",
        ApStatus::NullPointer => b"null pointer argument\0",
        ApStatus::Utf8Error => b"string argument is not valid UTF-8\0",
        ApStatus::InvalidInput => b"invalid input\0",
        ApStatus::NoCoverage => b"no coverage\0",
        ApStatus::Infeasible => b"infeasible configuration\0",
        ApStatus::NumericError => b"numeric failure\0",
        ApStatus::IoError => b"I/O failure\0",
    };
    text.as_ptr() as *const c_char
}

/// Opaque sound-speed profile handle.
pub struct ApProfile {
    inner: SoundSpeedProfile,
}

/// Opaque anchor-cluster handle.
pub struct ApCluster {
    inner: ClusterTopology,
}

/// Opaque deployment-plan handle.
pub struct ApPlan {
    inner: DeploymentPlan,
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, ApStatus> {
    if ptr.is_null() {
        return Err(ApStatus::NullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| ApStatus::Utf8Error)
}

/// Create a built-in profile (`"iso1500"` or `"default-munk-like"`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_builtin(
    name: *const c_char,
    out: *mut *mut ApProfile,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let name = match cstr(name) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match SoundSpeedProfile::by_name(name) {
            Ok(profile) => {
                *out = Box::into_raw(Box::new(ApProfile { inner: profile }));
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Load a profile from a `depth_m,speed_mps` CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_from_csv(
    path: *const c_char,
    out: *mut *mut ApProfile,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let path = match cstr(path) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match SoundSpeedProfile::from_csv_path(path) {
            Ok(profile) => {
                *out = Box::into_raw(Box::new(ApProfile { inner: profile }));
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Resample a profile onto the slab between two depths with uniform layers.
///
/// # Safety
/// `profile` must be a live handle from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_resample(
    profile: *const ApProfile,
    target_depth_m: f64,
    anchor_depth_m: f64,
    layer_thickness_m: f64,
    out: *mut *mut ApProfile,
) -> ApStatus {
    if profile.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        match (*profile)
            .inner
            .resample_slab(target_depth_m, anchor_depth_m, layer_thickness_m)
        {
            Ok(slab) => {
                *out = Box::into_raw(Box::new(ApProfile { inner: slab }));
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Number of layers in the profile.
///
/// # Safety
/// `profile` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_layer_count(
    profile: *const ApProfile,
    out: *mut usize,
) -> ApStatus {
    if profile.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    *out = (*profile).inner.layer_count();
    ApStatus::Ok
}

/// Destroy a profile handle. Passing NULL is a no-op.
///
/// # Safety
/// `profile` must be a pointer previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_free(profile: *mut ApProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Refraction-aware LOS range variance (m²) at the given elevation angle.
///
/// # Safety
/// `profile` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_los_variance(
    profile: *const ApProfile,
    elevation_rad: f64,
    gamma: f64,
    out: *mut f64,
) -> ApStatus {
    if profile.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let params = match RangeErrorParams::new(gamma) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        match los_variance(&(*profile).inner, elevation_rad, &params) {
            Ok(v) => {
                *out = v;
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Build an anchor ring sized by the design elevation angle.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_cluster_ring(
    center_x_m: f64,
    center_y_m: f64,
    anchor_depth_m: f64,
    target_depth_m: f64,
    n_anchors: u32,
    design_elevation_rad: f64,
    out: *mut *mut ApCluster,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        match ClusterTopology::ring(
            (center_x_m, center_y_m),
            anchor_depth_m,
            target_depth_m,
            n_anchors as usize,
            design_elevation_rad,
        ) {
            Ok(cluster) => {
                *out = Box::into_raw(Box::new(ApCluster { inner: cluster }));
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Destroy a cluster handle. Passing NULL is a no-op.
///
/// # Safety
/// `cluster` must be a pointer previously returned by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_cluster_free(cluster: *mut ApCluster) {
    if !cluster.is_null() {
        drop(Box::from_raw(cluster));
    }
}

/// Coverage membership rule.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApCoverageRule {
    AtLeastThree = 0,
    AllAnchors = 1,
}

impl From<ApCoverageRule> for CoverageRule {
    fn from(rule: ApCoverageRule) -> Self {
        match rule {
            ApCoverageRule::AtLeastThree => CoverageRule::AtLeastThree,
            ApCoverageRule::AllAnchors => CoverageRule::AllAnchors,
        }
    }
}

/// Radius measurement semantics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApRadiusSemantics {
    LargestCoveredDisc = 0,
    MaxServiceExtent = 1,
}

impl From<ApRadiusSemantics> for RadiusSemantics {
    fn from(semantics: ApRadiusSemantics) -> Self {
        match semantics {
            ApRadiusSemantics::LargestCoveredDisc => RadiusSemantics::LargestCoveredDisc,
            ApRadiusSemantics::MaxServiceExtent => RadiusSemantics::MaxServiceExtent,
        }
    }
}

/// Coverage radius of a cluster at its design target depth.
///
/// # Safety
/// `cluster` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_coverage_radius(
    cluster: *const ApCluster,
    comm_range_m: f64,
    rule: ApCoverageRule,
    semantics: ApRadiusSemantics,
    out: *mut f64,
) -> ApStatus {
    if cluster.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        match coverage_radius_with(
            &(*cluster).inner,
            comm_range_m,
            rule.into(),
            semantics.into(),
        ) {
            Ok(radius) => {
                *out = radius;
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Closed-form center CRLB of a symmetric ring (m²).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_center_crlb(
    n_anchors: u32,
    elevation_rad: f64,
    sigma_d_sq: f64,
    out: *mut f64,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(
        || match center_crlb(n_anchors as usize, elevation_rad, sigma_d_sq) {
            Ok(v) => {
                *out = v;
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        },
    )
}

/// CRLB trace (m²) at a point served by the cluster's in-range anchors. The
/// profile must already span the slab from the point's depth to the anchor
/// depth (see [`ap_profile_resample`]).
///
/// # Safety
/// `cluster` and `profile` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_point_crlb(
    cluster: *const ApCluster,
    profile: *const ApProfile,
    gamma: f64,
    x_m: f64,
    y_m: f64,
    depth_m: f64,
    comm_range_m: f64,
    rule: ApCoverageRule,
    out: *mut f64,
) -> ApStatus {
    if cluster.is_null() || profile.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let params = match RangeErrorParams::new(gamma) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let spec = match CoverageSpec::new(comm_range_m, rule.into()) {
            Ok(s) => s,
            Err(err) => return status_of(&err),
        };
        match point_crlb(
            &(*cluster).inner,
            &(*profile).inner,
            &params,
            &spec,
            x_m,
            y_m,
            depth_m,
        ) {
            Ok(v) => {
                *out = v;
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Scalar facts about a laid-out plan.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApPlanInfo {
    pub side_m: f64,
    pub n_clusters: u32,
    pub per_axis: u32,
    pub placed_clusters: u32,
    pub d_c_m: f64,
    pub d_com_m: f64,
    pub d_h_m: f64,
    pub d_h1_m: f64,
    pub leftover_anchors: u32,
    pub unplaced_clusters: u32,
}

/// Lay out clusters on the grid.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_plan_layout(
    side_km: f64,
    n_total: u32,
    per_cluster: u32,
    d_com_m: f64,
    out: *mut *mut ApPlan,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(
        || match layout_clusters(side_km, n_total as usize, per_cluster as usize, d_com_m) {
            Ok(plan) => {
                *out = Box::into_raw(Box::new(ApPlan { inner: plan }));
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        },
    )
}

/// Destroy a plan handle. Passing NULL is a no-op.
///
/// # Safety
/// `plan` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ap_plan_free(plan: *mut ApPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Read the plan's derived scalar fields.
///
/// # Safety
/// `plan` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_plan_info(plan: *const ApPlan, out: *mut ApPlanInfo) -> ApStatus {
    if plan.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    let p = &(*plan).inner;
    *out = ApPlanInfo {
        side_m: p.side_m,
        n_clusters: p.n_clusters as u32,
        per_axis: p.per_axis as u32,
        placed_clusters: p.cluster_centers.len() as u32,
        d_c_m: p.d_c_m,
        d_com_m: p.d_com_m,
        d_h_m: p.d_h_m,
        d_h1_m: p.d_h1_m,
        leftover_anchors: p.leftover_anchors as u32,
        unplaced_clusters: p.unplaced_clusters as u32,
    };
    ApStatus::Ok
}

/// Center coordinates of the cluster at `index` (row-major grid order).
///
/// # Safety
/// `plan` must be a live handle; `out_x` and `out_y` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_plan_center(
    plan: *const ApPlan,
    index: usize,
    out_x: *mut f64,
    out_y: *mut f64,
) -> ApStatus {
    if plan.is_null() || out_x.is_null() || out_y.is_null() {
        return ApStatus::NullPointer;
    }
    let centers = &(*plan).inner.cluster_centers;
    let Some(&(x, y)) = centers.get(index) else {
        return ApStatus::InvalidInput;
    };
    *out_x = x;
    *out_y = y;
    ApStatus::Ok
}

/// Stable-navigation margin (m²); positive means the condition holds.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_stable_navigation_margin(
    d_com_m: f64,
    d_h1_m: f64,
    sigma0_sq: f64,
    beta1: f64,
    beta2: f64,
    distance_unit_m: f64,
    out: *mut f64,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let model = match InsDivergenceModel::new(sigma0_sq, beta1, beta2, distance_unit_m) {
            Ok(m) => m,
            Err(err) => return status_of(&err),
        };
        *out = stable_navigation_margin(d_com_m, d_h1_m, &model);
        ApStatus::Ok
    })
}

/// Largest serviceable region side (km). Returns `AP_STATUS_INFEASIBLE` when
/// the margin is nonpositive for every gap; `out_side_km` is only written on
/// `AP_STATUS_OK`.
///
/// # Safety
/// `out_side_km` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_max_coverage_side(
    n_total: u32,
    per_cluster: u32,
    d_com_m: f64,
    sigma0_sq: f64,
    beta1: f64,
    beta2: f64,
    distance_unit_m: f64,
    out_side_km: *mut f64,
) -> ApStatus {
    if out_side_km.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let model = match InsDivergenceModel::new(sigma0_sq, beta1, beta2, distance_unit_m) {
            Ok(m) => m,
            Err(err) => return status_of(&err),
        };
        match max_coverage_side(n_total as usize, per_cluster as usize, d_com_m, &model) {
            Ok(SideOutcome::Feasible { side_km, .. }) => {
                *out_side_km = side_km;
                ApStatus::Ok
            }
            Ok(SideOutcome::Infeasible) => ApStatus::Infeasible,
            Err(err) => status_of(&err),
        }
    })
}

/// Closed-form expected voyage error (m²) of the scaling law.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ap_scaling_law(
    n_total: u32,
    per_cluster: u32,
    side_km: f64,
    d_com_m: f64,
    elevation_rad: f64,
    sigma_d_sq: f64,
    sigma0_sq: f64,
    beta1: f64,
    beta2: f64,
    distance_unit_m: f64,
    speed_mps: f64,
    slot_s: f64,
    out: *mut f64,
) -> ApStatus {
    if out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let model = match InsDivergenceModel::new(sigma0_sq, beta1, beta2, distance_unit_m) {
            Ok(m) => m,
            Err(err) => return status_of(&err),
        };
        let leg = match LegSampling::new(speed_mps, slot_s, 0.0) {
            Ok(l) => l,
            Err(err) => return status_of(&err),
        };
        match scaling_law(
            n_total as usize,
            per_cluster as usize,
            side_km,
            d_com_m,
            elevation_rad,
            sigma_d_sq,
            &model,
            &leg,
        ) {
            Ok(v) => {
                *out = v;
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Path family selector for simulations.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApPathKind {
    R1 = 0,
    R2 = 1,
    R3 = 2,
    Random = 3,
}

impl From<ApPathKind> for PathSelector {
    fn from(kind: ApPathKind) -> Self {
        match kind {
            ApPathKind::R1 => PathSelector::R1,
            ApPathKind::R2 => PathSelector::R2,
            ApPathKind::R3 => PathSelector::R3,
            ApPathKind::Random => PathSelector::Random,
        }
    }
}

/// Simulation parameters for [`ap_monte_carlo_summary`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApSimConfig {
    pub anchor_depth_m: f64,
    pub target_depth_m: f64,
    pub design_elevation_rad: f64,
    pub comm_range_m: f64,
    pub gamma: f64,
    pub sigma0_sq: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub distance_unit_m: f64,
    pub speed_mps: f64,
    pub slot_s: f64,
    pub layer_thickness_m: f64,
    pub path_kind: ApPathKind,
    pub coverage_rule: ApCoverageRule,
    pub trials: u32,
    pub master_seed: u64,
}

/// Monte Carlo batch statistics of the per-trial mean error variance (m²).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApMcSummary {
    pub trials: u32,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Seeded Monte Carlo voyages over the plan; deterministic for a given
/// configuration and master seed.
///
/// # Safety
/// `plan` and `profile` must be live handles; `config` and `out` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ap_monte_carlo_summary(
    plan: *const ApPlan,
    profile: *const ApProfile,
    config: *const ApSimConfig,
    out: *mut ApMcSummary,
) -> ApStatus {
    if plan.is_null() || profile.is_null() || config.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let cfg = &*config;
        let plan = &(*plan).inner;
        let template = match ClusterTopology::ring(
            (0.0, 0.0),
            cfg.anchor_depth_m,
            cfg.target_depth_m,
            plan.per_cluster,
            cfg.design_elevation_rad,
        ) {
            Ok(c) => c,
            Err(err) => return status_of(&err),
        };
        let clusters: Vec<ClusterTopology> = plan
            .cluster_centers
            .iter()
            .map(|&c| template.at_center(c))
            .collect();
        let slab = match (*profile).inner.resample_slab(
            cfg.target_depth_m,
            cfg.anchor_depth_m,
            cfg.layer_thickness_m,
        ) {
            Ok(s) => s,
            Err(err) => return status_of(&err),
        };
        let params = match RangeErrorParams::new(cfg.gamma) {
            Ok(p) => p,
            Err(err) => return status_of(&err),
        };
        let coverage = match CoverageSpec::new(cfg.comm_range_m, cfg.coverage_rule.into()) {
            Ok(s) => s,
            Err(err) => return status_of(&err),
        };
        let model =
            match InsDivergenceModel::new(cfg.sigma0_sq, cfg.beta1, cfg.beta2, cfg.distance_unit_m)
            {
                Ok(m) => m,
                Err(err) => return status_of(&err),
            };
        let leg = match LegSampling::new(cfg.speed_mps, cfg.slot_s, 0.0) {
            Ok(l) => l,
            Err(err) => return status_of(&err),
        };
        let scenario = SimScenario {
            plan,
            clusters: &clusters,
            profile: &slab,
            params,
            coverage,
            options: SimOptions::default(),
        };
        match monte_carlo(
            &scenario,
            cfg.path_kind.into(),
            cfg.target_depth_m,
            cfg.trials as usize,
            &model,
            &leg,
            cfg.master_seed,
        ) {
            Ok((_, summary)) => {
                *out = ApMcSummary {
                    trials: summary.trials as u32,
                    mean: summary.mean,
                    std: summary.std,
                    min: summary.min,
                    max: summary.max,
                };
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Divergence-fit output; `beta2` is per unit of the input `delta_p`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApFitResult {
    pub sigma0_sq: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub residual: f64,
}

/// Least-squares fit of the exponential divergence law to parallel arrays of
/// `delta_p` and `variance` samples.
///
/// # Safety
/// `delta_p` and `variance` must point to `len` readable doubles; `out` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn ap_fit_divergence(
    delta_p: *const f64,
    variance: *const f64,
    len: usize,
    out: *mut ApFitResult,
) -> ApStatus {
    if delta_p.is_null() || variance.is_null() || out.is_null() {
        return ApStatus::NullPointer;
    }
    guard(|| {
        let xs = std::slice::from_raw_parts(delta_p, len);
        let ys = std::slice::from_raw_parts(variance, len);
        let series: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        match fit_divergence(&series) {
            Ok(fit) => {
                *out = ApFitResult {
                    sigma0_sq: fit.model.sigma0_sq,
                    beta1: fit.model.beta1,
                    beta2: fit.model.beta2,
                    residual: fit.residual,
                };
                ApStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
