//! Hybrid positioning/navigation objective, per-path plan evaluation, the
//! anchors-per-cluster search, and the closed-form voyage scaling law.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deploy::{layout_clusters, DeploymentPlan};
use crate::error::{Error, Result};
use crate::geometry::{
    center_crlb, coverage_radius, expected_crlb_field, ClusterTopology, CoverageSpec, Region,
};
use crate::ins::{leg_error_expectation, Axes, InsDivergenceModel, LegSampling};
use crate::profile::{los_variance, RangeErrorParams, SoundSpeedProfile};

/// Weights of the hybrid objective: `lambda1` splits uncovered/covered
/// portions, `lambda2` splits positioning/navigation inside coverage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ObjectiveWeights {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be in [0, 1], got {v}"
                )));
            }
        }
        Ok(Self { lambda1, lambda2 })
    }
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: 1.0,
        }
    }
}

/// Full hybrid objective:
/// `(1 - l1) nav_uncovered + l1 (l2 q + (1 - l2) nav_covered)`.
/// With `lambda2 = 1` this reduces to `l1 q + (1 - l1) nav_uncovered`.
pub fn hybrid_objective(
    weights: &ObjectiveWeights,
    q_m2: f64,
    nav_covered_m2: f64,
    nav_uncovered_m2: f64,
) -> f64 {
    (1.0 - weights.lambda1) * nav_uncovered_m2
        + weights.lambda1 * (weights.lambda2 * q_m2 + (1.0 - weights.lambda2) * nav_covered_m2)
}

/// Crossing-path family between clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    /// Along a cluster row (x axis drifts).
    R1,
    /// Along a cluster column (y axis drifts).
    R2,
    /// Along the grid diagonal (both axes drift the full gap).
    R3,
}

impl PathKind {
    pub const ALL: [PathKind; 3] = [PathKind::R1, PathKind::R2, PathKind::R3];

    pub fn axes(&self) -> Axes {
        match self {
            PathKind::R1 => Axes::X,
            PathKind::R2 => Axes::Y,
            PathKind::R3 => Axes::Both,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PathKind::R1 => "r1",
            PathKind::R2 => "r2",
            PathKind::R3 => "r3",
        }
    }
}

/// One evaluated objective: positioning term, navigation term, weighted sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEvaluation {
    pub q_term_m2: f64,
    pub nav_term_m2: f64,
    pub objective_m2: f64,
    pub path_kind: PathKind,
}

/// Per-path objective of a laid-out plan: navigation term from the
/// pure-navigation gap `d_h` with the path's drifting axes, combined as
/// `lambda1 * q + (1 - lambda1) * nav`.
pub fn path_objective(
    plan: &DeploymentPlan,
    q_m2: f64,
    model: &InsDivergenceModel,
    leg: &LegSampling,
    path_kind: PathKind,
    lambda1: f64,
) -> Result<PlanEvaluation> {
    if !(0.0..=1.0).contains(&lambda1) {
        return Err(Error::InvalidInput(format!(
            "lambda1 must be in [0, 1], got {lambda1}"
        )));
    }
    let gap = plan.d_h_m.max(0.0);
    let nav = leg_error_expectation(model, &leg.with_distance(gap)?, path_kind.axes())?;
    Ok(PlanEvaluation {
        q_term_m2: q_m2,
        nav_term_m2: nav,
        objective_m2: lambda1 * q_m2 + (1.0 - lambda1) * nav,
        path_kind,
    })
}

/// Geometry and traversal settings shared by every candidate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub side_km: f64,
    pub n_total: usize,
    pub anchor_depth_m: f64,
    pub target_depth_m: f64,
    pub design_elevation_rad: f64,
    pub coverage: CoverageSpec,
    pub step_m: f64,
    pub layer_thickness_m: f64,
}

/// Everything computed for one anchors-per-cluster candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEvaluation {
    pub per_cluster: usize,
    pub d_com_m: f64,
    pub q_m2: f64,
    pub paths: Vec<PlanEvaluation>,
    pub mean_nav_m2: f64,
    pub objective_m2: f64,
    pub plan: DeploymentPlan,
}

/// Run the full pipeline for one candidate: ring topology, coverage radius,
/// traversal Q over the service region, grid layout, and the three path
/// objectives averaged uniformly.
pub fn evaluate_candidate(
    scenario: &ScenarioParams,
    per_cluster: usize,
    profile: &SoundSpeedProfile,
    params: &RangeErrorParams,
    model: &InsDivergenceModel,
    leg: &LegSampling,
    lambda1: f64,
) -> Result<CandidateEvaluation> {
    let cluster = ClusterTopology::ring(
        (0.0, 0.0),
        scenario.anchor_depth_m,
        scenario.target_depth_m,
        per_cluster,
        scenario.design_elevation_rad,
    )?;
    let slab = profile.resample_slab(
        scenario.target_depth_m,
        scenario.anchor_depth_m,
        scenario.layer_thickness_m,
    )?;
    let d_com = coverage_radius(
        &cluster,
        scenario.coverage.comm_range_m,
        scenario.coverage.rule,
    )?;

    let dz = scenario.anchor_depth_m - scenario.target_depth_m;
    let reach = (scenario.coverage.comm_range_m.powi(2) - dz * dz)
        .max(0.0)
        .sqrt();
    let half_side = cluster.ring_radius_m + reach;
    let region = Region::square_around((0.0, 0.0), half_side)?;
    let field = expected_crlb_field(
        &cluster,
        &slab,
        params,
        &region,
        scenario.step_m,
        &scenario.coverage,
    )?;
    let q = field.q_m2;

    let plan = layout_clusters(scenario.side_km, scenario.n_total, per_cluster, d_com)?;
    let paths: Vec<PlanEvaluation> = PathKind::ALL
        .iter()
        .map(|&kind| path_objective(&plan, q, model, leg, kind, lambda1))
        .collect::<Result<_>>()?;
    let mean_nav = paths.iter().map(|p| p.nav_term_m2).sum::<f64>() / paths.len() as f64;
    Ok(CandidateEvaluation {
        per_cluster,
        d_com_m: d_com,
        q_m2: q,
        paths,
        mean_nav_m2: mean_nav,
        objective_m2: lambda1 * q + (1.0 - lambda1) * mean_nav,
        plan,
    })
}

/// Argmin over `(candidate, objective)` rows with ties broken toward the
/// smallest candidate count.
pub fn select_best(rows: &[(usize, f64)]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &(count, objective) in rows {
        let replace = match best {
            None => true,
            Some((bc, bo)) => objective < bo || (objective == bo && count < bc),
        };
        if replace {
            best = Some((count, objective));
        }
    }
    best.map(|(count, _)| count)
}

/// Per-candidate outcome table preserving the caller's candidate order.
pub type CandidateTable = Vec<(usize, Result<CandidateEvaluation>)>;

/// Evaluate every candidate (parallel map, input order preserved) and return
/// the argmin along with the full table. Candidates that fail layout or
/// coverage stay in the table as errors; if all fail, the whole call fails
/// with [`Error::AllInfeasible`].
#[allow(clippy::too_many_arguments)]
pub fn optimize_per_cluster(
    scenario: &ScenarioParams,
    candidates: &[usize],
    weights: &ObjectiveWeights,
    model: &InsDivergenceModel,
    profile: &SoundSpeedProfile,
    params: &RangeErrorParams,
    leg: &LegSampling,
) -> Result<(usize, CandidateTable)> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("candidate list is empty".into()));
    }
    let table: CandidateTable = candidates
        .par_iter()
        .map(|&per_cluster| {
            (
                per_cluster,
                evaluate_candidate(
                    scenario,
                    per_cluster,
                    profile,
                    params,
                    model,
                    leg,
                    weights.lambda1,
                ),
            )
        })
        .collect();
    let rows: Vec<(usize, f64)> = table
        .iter()
        .filter_map(|(count, result)| result.as_ref().ok().map(|eval| (*count, eval.objective_m2)))
        .collect();
    let best = select_best(&rows).ok_or(Error::AllInfeasible)?;
    Ok((best, table))
}

/// Closed-form expected voyage error (the anchor-count scaling law):
/// coverage fraction times the center CRLB plus navigation fraction times the
/// gap-leg drift expectation. The two path-length fractions sum to one.
#[allow(clippy::too_many_arguments)]
pub fn scaling_law(
    n_total: usize,
    per_cluster: usize,
    side_km: f64,
    d_com_m: f64,
    elevation_rad: f64,
    sigma_d_sq: f64,
    model: &InsDivergenceModel,
    leg: &LegSampling,
) -> Result<f64> {
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
    let per_axis = {
        let mut r = (n_clusters as f64).sqrt() as usize;
        while (r + 1) * (r + 1) <= n_clusters {
            r += 1;
        }
        while r * r > n_clusters {
            r -= 1;
        }
        r
    } as f64;
    let d_h1 = (side_m - 2.0 * d_com_m * per_axis) / (per_axis + 1.0);
    if d_h1 < 0.0 {
        return Err(Error::NegativeGap { d_h1 });
    }
    let coverage_fraction = 2.0 * d_com_m * per_axis / side_m;
    let nav_fraction = d_h1 * (per_axis + 1.0) / side_m;
    let positioning = center_crlb(per_cluster, elevation_rad, sigma_d_sq)?;
    let nav = leg_error_expectation(model, &leg.with_distance(d_h1)?, Axes::X)?;
    Ok(coverage_fraction * positioning + nav_fraction * nav)
}

/// Convenience: the refraction variance at the design elevation for a slab
/// profile, as used by the scaling law's center CRLB.
pub fn design_sigma_d_sq(
    profile: &SoundSpeedProfile,
    design_elevation_rad: f64,
    params: &RangeErrorParams,
) -> Result<f64> {
    los_variance(profile, design_elevation_rad, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn reference_leg() -> LegSampling {
        LegSampling::new(2.0, 50.0, 0.0).unwrap()
    }

    fn scenario() -> ScenarioParams {
        ScenarioParams {
            side_km: 20.0,
            n_total: 48,
            anchor_depth_m: 3000.0,
            target_depth_m: 500.0,
            design_elevation_rad: 46f64.to_radians(),
            coverage: CoverageSpec::new(5000.0, crate::geometry::CoverageRule::AtLeastThree)
                .unwrap(),
            step_m: 250.0,
            layer_thickness_m: 100.0,
        }
    }

    #[test]
    fn hybrid_weight_collapses() {
        let w = ObjectiveWeights::new(1.0, 1.0).unwrap();
        assert_eq!(hybrid_objective(&w, 2.0, 7.0, 10.0), 2.0);
        let w0 = ObjectiveWeights::new(0.0, 1.0).unwrap();
        assert_eq!(hybrid_objective(&w0, 2.0, 7.0, 10.0), 10.0);
        let w5 = ObjectiveWeights::new(0.5, 1.0).unwrap();
        assert_relative_eq!(
            hybrid_objective(&w5, 2.0, 7.0, 10.0),
            6.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hybrid_reduces_to_simplified_form_at_lambda2_one() {
        let w = ObjectiveWeights::new(0.3, 1.0).unwrap();
        let q = 1.7;
        let nav = 9.1;
        assert_relative_eq!(
            hybrid_objective(&w, q, 123.0, nav),
            0.3 * q + 0.7 * nav,
            max_relative = 1e-15
        );
    }

    #[test]
    fn hybrid_monotone_in_each_argument() {
        let w = ObjectiveWeights::new(0.4, 0.6).unwrap();
        let base = hybrid_objective(&w, 1.0, 2.0, 3.0);
        assert!(hybrid_objective(&w, 1.5, 2.0, 3.0) >= base);
        assert!(hybrid_objective(&w, 1.0, 2.5, 3.0) >= base);
        assert!(hybrid_objective(&w, 1.0, 2.0, 3.5) >= base);
    }

    #[test]
    fn path_objective_symmetry_and_domination() {
        let plan = layout_clusters(20.0, 48, 4, 2272.3).unwrap();
        let model = InsDivergenceModel::default();
        let leg = reference_leg();
        let q = 4.0e-4;
        let r1 = path_objective(&plan, q, &model, &leg, PathKind::R1, 0.5).unwrap();
        let r2 = path_objective(&plan, q, &model, &leg, PathKind::R2, 0.5).unwrap();
        let r3 = path_objective(&plan, q, &model, &leg, PathKind::R3, 0.5).unwrap();
        assert_eq!(r1.nav_term_m2, r2.nav_term_m2);
        assert!(r3.nav_term_m2 >= r1.nav_term_m2);
        // Composition oracle: nav straight from the leg expectation.
        let oracle = leg_error_expectation(
            &model,
            &leg.with_distance(plan.d_h_m.max(0.0)).unwrap(),
            Axes::X,
        )
        .unwrap();
        assert_relative_eq!(r1.nav_term_m2, oracle, max_relative = 1e-12);
        assert_relative_eq!(
            r1.objective_m2,
            0.5 * q + 0.5 * oracle,
            max_relative = 1e-12
        );
    }

    #[test]
    fn select_best_breaks_ties_toward_smallest() {
        assert_eq!(select_best(&[(5, 2.0), (3, 2.0), (4, 2.0)]), Some(3));
        assert_eq!(select_best(&[(5, 1.0), (3, 2.0)]), Some(5));
        assert_eq!(select_best(&[]), None);
    }

    #[test]
    fn select_best_invariant_under_positive_scaling() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rows: Vec<(usize, f64)> =
                (3..8).map(|c| (c, rng.random_range(0.1..10.0))).collect();
            let scale = rng.random_range(0.001..1000.0);
            let scaled: Vec<(usize, f64)> = rows.iter().map(|&(c, o)| (c, o * scale)).collect();
            assert_eq!(select_best(&rows), select_best(&scaled));
        }
    }

    #[test]
    fn optimize_single_candidate_returns_it() {
        let scn = scenario();
        let profile = SoundSpeedProfile::iso1500();
        let params = RangeErrorParams::new(0.001).unwrap();
        let model = InsDivergenceModel::default();
        let (best, table) = optimize_per_cluster(
            &scn,
            &[4],
            &ObjectiveWeights::default(),
            &model,
            &profile,
            &params,
            &reference_leg(),
        )
        .unwrap();
        assert_eq!(best, 4);
        assert_eq!(table.len(), 1);
        assert!(table[0].1.is_ok());
    }

    #[test]
    fn optimize_lambda1_one_ranks_by_q_alone() {
        let scn = scenario();
        let profile = SoundSpeedProfile::iso1500();
        let params = RangeErrorParams::new(0.001).unwrap();
        let model = InsDivergenceModel::default();
        let (best, table) = optimize_per_cluster(
            &scn,
            &[3, 4, 5],
            &ObjectiveWeights::new(1.0, 1.0).unwrap(),
            &model,
            &profile,
            &params,
            &reference_leg(),
        )
        .unwrap();
        let qs: Vec<(usize, f64)> = table
            .iter()
            .map(|(c, r)| (*c, r.as_ref().unwrap().q_m2))
            .collect();
        let q_best = select_best(&qs).unwrap();
        assert_eq!(best, q_best);
        for (_, r) in &table {
            let eval = r.as_ref().unwrap();
            assert_eq!(eval.objective_m2, eval.q_m2);
        }
    }

    #[test]
    fn scaling_law_fractions_and_degenerate_cases() {
        let model = InsDivergenceModel::default();
        let leg = reference_leg();
        // d_h1 = 0: pure coverage, result is exactly the center CRLB.
        let d_com = 2500.0;
        let side_km = 2.0 * d_com * 3.0 / 1000.0;
        let v = scaling_law(27, 3, side_km, d_com, 0.8, 1e-5, &model, &leg).unwrap();
        assert_relative_eq!(v, center_crlb(3, 0.8, 1e-5).unwrap(), max_relative = 1e-9);
        // Overlapping coverage: negative gap is rejected.
        assert!(matches!(
            scaling_law(27, 3, side_km * 0.9, d_com, 0.8, 1e-5, &model, &leg),
            Err(Error::NegativeGap { .. })
        ));
    }

    #[test]
    fn scaling_law_beta1_zero_weighted_sum() {
        let model = InsDivergenceModel::new(0.01, 0.0, 0.5, 1000.0).unwrap();
        let leg = reference_leg();
        let (n_total, per, side_km, d_com, alpha, s2) = (48, 4, 25.0, 2272.3, 0.8, 3.1e-6);
        let v = scaling_law(n_total, per, side_km, d_com, alpha, s2, &model, &leg).unwrap();
        let side_m = side_km * 1000.0;
        let nch = 3.0;
        let d_h1 = (side_m - 2.0 * d_com * nch) / (nch + 1.0);
        let fc = 2.0 * d_com * nch / side_m;
        let fn_ = d_h1 * (nch + 1.0) / side_m;
        let expected = fc * center_crlb(per, alpha, s2).unwrap() + fn_ * 0.01;
        assert_relative_eq!(v, expected, max_relative = 1e-12);
        assert_relative_eq!(fc + fn_, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_law_matches_term_by_term_oracle() {
        let model = InsDivergenceModel::default();
        let leg = reference_leg();
        let (n_total, per, side_km, d_com, alpha, s2) =
            (48, 4, 20.0, 2272.3, 46f64.to_radians(), 3.97e-6);
        let v = scaling_law(n_total, per, side_km, d_com, alpha, s2, &model, &leg).unwrap();
        // Independent recomputation.
        let side_m = 20_000.0;
        let nch = 3.0;
        let d_h1 = (side_m - 2.0 * d_com * nch) / (nch + 1.0);
        let n = ((d_h1 / 100.0).floor() as usize).max(1);
        let mut nav = 0.0;
        for k in 1..=n {
            nav += 0.01 + 0.039 * (0.053 * (k as f64 * 100.0) / 1000.0).exp();
        }
        nav /= n as f64;
        let expected = (2.0 * d_com * nch / side_m) * center_crlb(4, alpha, s2).unwrap()
            + (d_h1 * (nch + 1.0) / side_m) * nav;
        assert_relative_eq!(v, expected, max_relative = 1e-12);
    }

    #[test]
    fn scaling_law_nav_component_chain_over_per_cluster() {
        // Fixed n_total and d_com: growing per_cluster shrinks the grid, grows
        // the gap, and grows the navigation component.
        let model = InsDivergenceModel::default();
        let leg = reference_leg();
        let d_com = 1900.0;
        let mut prev_nav_part = 0.0;
        let mut prev_nch = usize::MAX;
        for per in [3usize, 4, 5, 6, 8] {
            let n_clusters = 96 / per;
            let nch = (n_clusters as f64).sqrt().floor() as usize;
            assert!(nch <= prev_nch);
            prev_nch = nch;
            let side_m = 40_000.0;
            let d_h1 = (side_m - 2.0 * d_com * nch as f64) / (nch as f64 + 1.0);
            let nav =
                leg_error_expectation(&model, &leg.with_distance(d_h1).unwrap(), Axes::X).unwrap();
            let nav_part = d_h1 * (nch as f64 + 1.0) / side_m * nav;
            assert!(
                nav_part >= prev_nav_part,
                "nav component fell at per_cluster {per}"
            );
            prev_nav_part = nav_part;
        }
    }
}
