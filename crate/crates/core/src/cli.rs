//! Command implementations behind the `anchorplan` binary. Each command is a
//! pure function of its config and writes a fixed set of files into the
//! output directory, so repeated runs are byte-identical.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::deploy::{layout_clusters, max_coverage_side, DeploymentPlan, SideOutcome};
use crate::error::{Error, Result};
use crate::geometry::{coverage_radius, expected_crlb_field, ClusterTopology, Region};
use crate::ins::fit_divergence;
use crate::planner::{evaluate_candidate, select_best, CandidateEvaluation, PathKind};
use crate::sim::{monte_carlo, SimScenario};

fn ensure_out_dir(out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    Ok(())
}

fn write_effective_config(cfg: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(out_dir.join("effective_config.json"))?);
    writeln!(w, "{}", cfg.to_pretty_json()?)?;
    Ok(())
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn reference_cluster(cfg: &ScenarioConfig, per_cluster: usize) -> Result<ClusterTopology> {
    ClusterTopology::ring(
        (0.0, 0.0),
        cfg.anchors.anchor_depth_m,
        cfg.target.depth_m,
        per_cluster,
        cfg.design_elevation_rad(),
    )
}

fn horizontal_reach(cfg: &ScenarioConfig) -> f64 {
    let dz = cfg.anchors.anchor_depth_m - cfg.target.depth_m;
    (cfg.anchors.comm_range_m.powi(2) - dz * dz).max(0.0).sqrt()
}

#[derive(Serialize)]
struct FieldMeta<'a> {
    cluster: &'a ClusterTopology,
    step_m: f64,
    rule: crate::geometry::CoverageRule,
    comm_range_m: f64,
    q_m2: f64,
    covered_cells: usize,
    total_cells: usize,
    nx: usize,
    ny: usize,
    config: &'a ScenarioConfig,
}

/// `field`: expected-CRLB traversal around one cluster (plot-ready CSV plus a
/// metadata sidecar).
pub fn cmd_field(cfg: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    ensure_out_dir(out_dir)?;
    let cluster = reference_cluster(cfg, cfg.anchors.per_cluster)?;
    let slab = cfg.slab_profile()?;
    let params = cfg.range_error_params()?;
    let spec = cfg.coverage_spec()?;
    let half_side = cfg
        .field
        .half_side_m
        .unwrap_or_else(|| cluster.ring_radius_m + horizontal_reach(cfg));
    let region = Region::square_around((0.0, 0.0), half_side)?;
    let field = expected_crlb_field(
        &cluster,
        &slab,
        &params,
        &region,
        cfg.traversal.step_m,
        &spec,
    )?;

    let csv_path = out_dir.join("field.csv");
    let mut w = BufWriter::new(fs::File::create(&csv_path)?);
    field.write_csv(&mut w)?;
    w.flush()?;

    let meta = FieldMeta {
        cluster: &cluster,
        step_m: cfg.traversal.step_m,
        rule: cfg.coverage.rule,
        comm_range_m: cfg.anchors.comm_range_m,
        q_m2: field.q_m2,
        covered_cells: field.covered_cells,
        total_cells: field.cells.len(),
        nx: field.nx,
        ny: field.ny,
        config: cfg,
    };
    write_json(&meta, &out_dir.join("field_meta.json"))?;
    write_effective_config(cfg, out_dir)?;
    println!(
        "field: {} covered cells, Q = {} m2",
        field.covered_cells, field.q_m2
    );
    Ok(())
}

#[derive(Serialize)]
struct CandidateVerdict {
    n_ca: usize,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_com_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_nav_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_lambda1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_objective_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct OptimizeVerdict<'a> {
    best_n_ca: usize,
    best_lambda1: f64,
    best_objective_m2: f64,
    per_candidate: Vec<CandidateVerdict>,
    config: &'a ScenarioConfig,
}

/// `optimize`: sweep anchors-per-cluster candidates across the lambda1 grid,
/// emit the per-path sweep CSV and the argmin verdict.
pub fn cmd_optimize(cfg: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    ensure_out_dir(out_dir)?;
    let scenario = cfg.scenario_params()?;
    let profile = cfg.load_profile()?;
    let params = cfg.range_error_params()?;
    let model = cfg.ins_model()?;
    let leg = cfg.leg(0.0)?;
    let lambdas = cfg.lambda1_values();

    // Candidate terms (q, per-path nav) are lambda-independent; evaluate once.
    let evaluations: Vec<(usize, Result<CandidateEvaluation>)> = cfg
        .anchors
        .candidates
        .iter()
        .map(|&per_cluster| {
            (
                per_cluster,
                evaluate_candidate(&scenario, per_cluster, &profile, &params, &model, &leg, 1.0),
            )
        })
        .collect();

    let sweep_path = out_dir.join("sweep.csv");
    let mut w = BufWriter::new(fs::File::create(&sweep_path)?);
    writeln!(w, "n_ca,lambda1,q_m2,nav_m2,objective_m2,path")?;
    for (n_ca, evaluation) in &evaluations {
        let Ok(eval) = evaluation else { continue };
        for &lambda1 in &lambdas {
            for path in &eval.paths {
                let objective = lambda1 * eval.q_m2 + (1.0 - lambda1) * path.nav_term_m2;
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    n_ca,
                    lambda1,
                    eval.q_m2,
                    path.nav_term_m2,
                    objective,
                    path.path_kind.as_str()
                )?;
            }
        }
    }
    w.flush()?;

    // Verdict over the path-averaged objective.
    let mut per_candidate = Vec::new();
    let mut global: Option<(usize, f64, f64)> = None; // (n_ca, lambda1, objective)
    for (n_ca, evaluation) in &evaluations {
        match evaluation {
            Ok(eval) => {
                let mut best: Option<(f64, f64)> = None; // (lambda1, objective)
                for &lambda1 in &lambdas {
                    let objective = lambda1 * eval.q_m2 + (1.0 - lambda1) * eval.mean_nav_m2;
                    if best.is_none_or(|(_, cur)| objective < cur) {
                        best = Some((lambda1, objective));
                    }
                }
                let (best_l1, best_obj) = best.expect("lambda grid is never empty");
                per_candidate.push(CandidateVerdict {
                    n_ca: *n_ca,
                    feasible: true,
                    d_com_m: Some(eval.d_com_m),
                    q_m2: Some(eval.q_m2),
                    mean_nav_m2: Some(eval.mean_nav_m2),
                    best_lambda1: Some(best_l1),
                    best_objective_m2: Some(best_obj),
                    reason: None,
                });
                if global.is_none_or(|(_, _, cur)| best_obj < cur) {
                    global = Some((*n_ca, best_l1, best_obj));
                }
            }
            Err(err) => per_candidate.push(CandidateVerdict {
                n_ca: *n_ca,
                feasible: false,
                d_com_m: None,
                q_m2: None,
                mean_nav_m2: None,
                best_lambda1: None,
                best_objective_m2: None,
                reason: Some(err.to_string()),
            }),
        }
    }
    let Some((best_n_ca, best_lambda1, best_objective)) = global else {
        return Err(Error::AllInfeasible);
    };
    let verdict = OptimizeVerdict {
        best_n_ca,
        best_lambda1,
        best_objective_m2: best_objective,
        per_candidate,
        config: cfg,
    };
    write_json(&verdict, &out_dir.join("verdict.json"))?;
    write_effective_config(cfg, out_dir)?;
    println!("optimize: best n_ca = {best_n_ca}, best lambda1 = {best_lambda1}");
    Ok(())
}

#[derive(Serialize)]
struct FeasibilityMeta<'a> {
    per_cluster: usize,
    d_com_m: f64,
    feasible_rows: usize,
    infeasible_rows: usize,
    config: &'a ScenarioConfig,
}

/// `feasibility`: maximum serviceable side versus total anchor count.
pub fn cmd_feasibility(cfg: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    ensure_out_dir(out_dir)?;
    let cluster = reference_cluster(cfg, cfg.anchors.per_cluster)?;
    let d_com = coverage_radius(&cluster, cfg.anchors.comm_range_m, cfg.coverage.rule)?;
    let model = cfg.ins_model()?;

    let csv_path = out_dir.join("feasibility.csv");
    let mut w = BufWriter::new(fs::File::create(&csv_path)?);
    writeln!(w, "n_total,max_side_km")?;
    let mut feasible_rows = 0usize;
    let mut infeasible_rows = 0usize;
    let mut n_total = cfg.feasibility.n_total_min.max(cfg.anchors.per_cluster);
    while n_total <= cfg.feasibility.n_total_max {
        match max_coverage_side(n_total, cfg.anchors.per_cluster, d_com, &model)? {
            SideOutcome::Feasible { side_km, .. } => {
                feasible_rows += 1;
                writeln!(w, "{n_total},{side_km}")?;
            }
            SideOutcome::Infeasible => {
                infeasible_rows += 1;
                writeln!(w, "{n_total},infeasible")?;
            }
        }
        n_total += cfg.feasibility.n_total_step;
    }
    w.flush()?;

    let meta = FeasibilityMeta {
        per_cluster: cfg.anchors.per_cluster,
        d_com_m: d_com,
        feasible_rows,
        infeasible_rows,
        config: cfg,
    };
    write_json(&meta, &out_dir.join("feasibility_meta.json"))?;
    write_effective_config(cfg, out_dir)?;
    println!("feasibility: {feasible_rows} feasible rows, {infeasible_rows} infeasible");
    Ok(())
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    trials: usize,
    mean: f64,
    std: f64,
    min: f64,
    max: f64,
    master_seed: u64,
    /// Square root of the mean variance, reported alongside the m² figure.
    mean_rms_m: f64,
    path_kind: &'a str,
    plan: &'a DeploymentPlan,
    config: &'a ScenarioConfig,
}

/// `simulate`: seeded Monte Carlo voyages across the laid-out plan.
pub fn cmd_simulate(cfg: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    ensure_out_dir(out_dir)?;
    let cluster = reference_cluster(cfg, cfg.anchors.per_cluster)?;
    let d_com = coverage_radius(&cluster, cfg.anchors.comm_range_m, cfg.coverage.rule)?;
    let plan = layout_clusters(
        cfg.region.side_km,
        cfg.anchors.n_total,
        cfg.anchors.per_cluster,
        d_com,
    )?;
    let clusters: Vec<ClusterTopology> = plan
        .cluster_centers
        .iter()
        .map(|&c| cluster.at_center(c))
        .collect();
    let slab = cfg.slab_profile()?;
    let scenario = SimScenario {
        plan: &plan,
        clusters: &clusters,
        profile: &slab,
        params: cfg.range_error_params()?,
        coverage: cfg.coverage_spec()?,
        options: cfg.sim_options(),
    };
    let model = cfg.ins_model()?;
    let leg = cfg.leg(0.0)?;
    let (reports, summary) = monte_carlo(
        &scenario,
        cfg.simulation.path_kind,
        cfg.target.depth_m,
        cfg.simulation.trials,
        &model,
        &leg,
        cfg.simulation.master_seed,
    )?;

    let trials_path = out_dir.join("trials.csv");
    let mut w = BufWriter::new(fs::File::create(&trials_path)?);
    writeln!(w, "trial,seed,mean_error_var_m2")?;
    for (t, report) in reports.iter().enumerate() {
        writeln!(
            w,
            "{},{},{}",
            t, report.trial_seed, report.mean_error_var_m2
        )?;
    }
    w.flush()?;

    if cfg.simulation.per_sample_csv {
        let samples_path = out_dir.join("samples.csv");
        let mut w = BufWriter::new(fs::File::create(&samples_path)?);
        writeln!(w, "trial,s_m,error_var_m2,in_coverage")?;
        for (t, report) in reports.iter().enumerate() {
            for sample in &report.per_sample {
                writeln!(
                    w,
                    "{},{},{},{}",
                    t,
                    sample.s_m,
                    sample.error_var_m2,
                    u8::from(sample.in_coverage)
                )?;
            }
        }
        w.flush()?;
    }

    let out = SimulateSummary {
        trials: summary.trials,
        mean: summary.mean,
        std: summary.std,
        min: summary.min,
        max: summary.max,
        master_seed: summary.master_seed,
        mean_rms_m: summary.mean.sqrt(),
        path_kind: cfg.simulation.path_kind.as_str(),
        plan: &plan,
        config: cfg,
    };
    write_json(&out, &out_dir.join("summary.json"))?;
    write_json(&plan, &out_dir.join("plan.json"))?;
    write_effective_config(cfg, out_dir)?;
    println!(
        "simulate: {} trials, mean error {} m2 (rms {} m)",
        summary.trials, summary.mean, out.mean_rms_m
    );
    Ok(())
}

#[derive(Serialize)]
struct FitOutput {
    sigma0_sq: f64,
    beta1: f64,
    beta2: f64,
    distance_unit_m: f64,
    residual: f64,
    points: usize,
}

/// `fit`: recover divergence coefficients from a `delta_p,variance_m2` CSV.
pub fn cmd_fit(input: &Path, out_dir: &Path) -> Result<()> {
    ensure_out_dir(out_dir)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(input)?;
    {
        let headers = reader.headers()?;
        if headers.len() < 2 || &headers[0] != "delta_p" || &headers[1] != "variance_m2" {
            return Err(Error::InvalidInput(format!(
                "fit input must start with header delta_p,variance_m2 (got {:?})",
                headers.iter().collect::<Vec<_>>()
            )));
        }
    }
    let mut series = Vec::new();
    for row in reader.records() {
        let row = row?;
        let x: f64 = row
            .get(0)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad delta_p in row {row:?}")))?;
        let y: f64 = row
            .get(1)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad variance in row {row:?}")))?;
        series.push((x, y));
    }
    let fit = fit_divergence(&series)?;
    let out = FitOutput {
        sigma0_sq: fit.model.sigma0_sq,
        beta1: fit.model.beta1,
        beta2: fit.model.beta2,
        distance_unit_m: fit.model.distance_unit_m,
        residual: fit.residual,
        points: series.len(),
    };
    write_json(&out, &out_dir.join("model.json"))?;
    println!(
        "fit: sigma0_sq = {}, beta1 = {}, beta2 = {}, residual = {}",
        out.sigma0_sq, out.beta1, out.beta2, out.residual
    );
    Ok(())
}

/// Sweep helper used by tests and the acceptance suite: candidate table at a
/// fixed lambda1 with the verdict tie-break applied.
pub fn best_candidate_at(
    evaluations: &[(usize, Result<CandidateEvaluation>)],
    lambda1: f64,
) -> Option<usize> {
    let rows: Vec<(usize, f64)> = evaluations
        .iter()
        .filter_map(|(n, r)| {
            r.as_ref()
                .ok()
                .map(|e| (*n, lambda1 * e.q_m2 + (1.0 - lambda1) * e.mean_nav_m2))
        })
        .collect();
    select_best(&rows)
}

/// The three per-path rows for one candidate at one lambda, as written to the
/// sweep CSV.
pub fn sweep_rows(eval: &CandidateEvaluation, lambda1: f64) -> Vec<(PathKind, f64)> {
    eval.paths
        .iter()
        .map(|p| {
            (
                p.path_kind,
                lambda1 * eval.q_m2 + (1.0 - lambda1) * p.nav_term_m2,
            )
        })
        .collect()
}
