//! Scenario configuration: one JSON document whose defaults reproduce the
//! reference deployment scenario (3000 m anchors, 46 degree design elevation,
//! 5000 m communication range, gamma 0.001, 500 m sailing depth, 2 m/s).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CoverageRule, CoverageSpec};
use crate::ins::{InsDivergenceModel, LegSampling};
use crate::planner::ScenarioParams;
use crate::profile::{RangeErrorParams, SoundSpeedProfile};
use crate::sim::{CoverageMembership, FixValue, PathSelector, SimOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionSection {
    pub side_km: f64,
}

impl Default for RegionSection {
    fn default() -> Self {
        Self { side_km: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnchorsSection {
    pub n_total: usize,
    pub per_cluster: usize,
    pub candidates: Vec<usize>,
    pub anchor_depth_m: f64,
    pub design_elevation_deg: f64,
    pub comm_range_m: f64,
    pub gamma: f64,
}

impl Default for AnchorsSection {
    fn default() -> Self {
        Self {
            n_total: 48,
            per_cluster: 4,
            candidates: vec![3, 4, 5],
            anchor_depth_m: 3000.0,
            design_elevation_deg: 46.0,
            comm_range_m: 5000.0,
            gamma: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TargetSection {
    pub depth_m: f64,
}

impl Default for TargetSection {
    fn default() -> Self {
        Self { depth_m: 500.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InsSection {
    pub sigma0_sq: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub distance_unit_m: f64,
}

impl Default for InsSection {
    fn default() -> Self {
        Self {
            sigma0_sq: 0.01,
            beta1: 0.039,
            beta2: 0.053,
            distance_unit_m: 1000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KinematicsSection {
    pub speed_mps: f64,
    /// Positioning slot; the default 50 s makes one sample per 100 m at 2 m/s,
    /// matching the traversal step.
    pub slot_s: f64,
}

impl Default for KinematicsSection {
    fn default() -> Self {
        Self {
            speed_mps: 2.0,
            slot_s: 50.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsSection {
    /// Single lambda1; takes precedence over the grid when set.
    pub lambda1: Option<f64>,
    /// Grid swept by `optimize`; defaults to 0.0..=1.0 in steps of 0.1.
    pub lambda1_grid: Option<Vec<f64>>,
    pub lambda2: f64,
}

impl Default for WeightsSection {
    fn default() -> Self {
        Self {
            lambda1: None,
            lambda1_grid: None,
            lambda2: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraversalSection {
    pub step_m: f64,
}

impl Default for TraversalSection {
    fn default() -> Self {
        Self { step_m: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverageSection {
    pub rule: CoverageRule,
}

impl Default for CoverageSection {
    fn default() -> Self {
        Self {
            rule: CoverageRule::AtLeastThree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub trials: usize,
    pub master_seed: u64,
    pub path_kind: PathSelector,
    pub membership: CoverageMembership,
    pub fix_value: FixValue,
    /// Also emit the per-sample CSV (one row per sample per trial).
    pub per_sample_csv: bool,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            trials: 100,
            master_seed: 2024,
            path_kind: PathSelector::Random,
            membership: CoverageMembership::DiscRadius,
            fix_value: FixValue::LocalCrlb,
            per_sample_csv: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSection {
    /// Built-in profile name; ignored when `path` is set.
    pub name: String,
    /// Optional `depth_m,speed_mps` CSV path.
    pub path: Option<PathBuf>,
    pub layer_thickness_m: f64,
}

impl Default for ProfileSection {
    fn default() -> Self {
        Self {
            name: "iso1500".to_string(),
            path: None,
            layer_thickness_m: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct FieldSection {
    /// Half side of the traversed square around the cluster; defaults to the
    /// cluster's maximum possible service reach.
    pub half_side_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeasibilitySection {
    pub n_total_min: usize,
    pub n_total_max: usize,
    pub n_total_step: usize,
}

impl Default for FeasibilitySection {
    fn default() -> Self {
        Self {
            n_total_min: 27,
            n_total_max: 200,
            n_total_step: 1,
        }
    }
}

/// The whole scenario. Every field has a reference-scenario default, so an
/// empty JSON object (`{}`) reproduces the baseline experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub region: RegionSection,
    pub anchors: AnchorsSection,
    pub target: TargetSection,
    pub ins: InsSection,
    pub kinematics: KinematicsSection,
    pub weights: WeightsSection,
    pub traversal: TraversalSection,
    pub coverage: CoverageSection,
    pub simulation: SimulationSection,
    pub profile: ProfileSection,
    pub field: FieldSection,
    pub feasibility: FeasibilitySection,
}

impl ScenarioConfig {
    /// Parse from JSON text, then validate.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        let mut need_pos = |name: &str, v: f64| {
            if !(v > 0.0) {
                problems.push(format!("{name}: must be > 0, got {v}"));
            }
        };
        need_pos("region.side_km", self.region.side_km);
        need_pos("anchors.anchor_depth_m", self.anchors.anchor_depth_m);
        need_pos("anchors.comm_range_m", self.anchors.comm_range_m);
        need_pos("anchors.gamma", self.anchors.gamma);
        need_pos("ins.distance_unit_m", self.ins.distance_unit_m);
        need_pos("kinematics.speed_mps", self.kinematics.speed_mps);
        need_pos("kinematics.slot_s", self.kinematics.slot_s);
        need_pos("traversal.step_m", self.traversal.step_m);
        need_pos("profile.layer_thickness_m", self.profile.layer_thickness_m);

        if !(self.anchors.design_elevation_deg > 0.0 && self.anchors.design_elevation_deg <= 90.0) {
            problems.push(format!(
                "anchors.design_elevation_deg: must be in (0, 90], got {}",
                self.anchors.design_elevation_deg
            ));
        }
        if self.anchors.per_cluster < 3 {
            problems.push(format!(
                "anchors.per_cluster: must be >= 3, got {}",
                self.anchors.per_cluster
            ));
        }
        if self.anchors.candidates.is_empty() {
            problems.push("anchors.candidates: must not be empty".to_string());
        }
        for &c in &self.anchors.candidates {
            if c < 3 {
                problems.push(format!(
                    "anchors.candidates: every entry must be >= 3, got {c}"
                ));
            }
        }
        if self.anchors.n_total < self.anchors.per_cluster {
            problems.push(format!(
                "anchors.n_total: must be >= per_cluster, got {} < {}",
                self.anchors.n_total, self.anchors.per_cluster
            ));
        }
        if !(self.target.depth_m >= 0.0 && self.target.depth_m < self.anchors.anchor_depth_m) {
            problems.push(format!(
                "target.depth_m: must lie in [0, anchor depth), got {}",
                self.target.depth_m
            ));
        }
        if self.anchors.comm_range_m <= self.anchors.anchor_depth_m - self.target.depth_m {
            problems.push(format!(
                "anchors.comm_range_m: must exceed the anchor-target depth gap {} m",
                self.anchors.anchor_depth_m - self.target.depth_m
            ));
        }
        for (name, v) in [
            ("ins.sigma0_sq", self.ins.sigma0_sq),
            ("ins.beta1", self.ins.beta1),
            ("ins.beta2", self.ins.beta2),
        ] {
            if !(v >= 0.0) {
                problems.push(format!("{name}: must be >= 0, got {v}"));
            }
        }
        if let Some(l1) = self.weights.lambda1 {
            if !(0.0..=1.0).contains(&l1) {
                problems.push(format!("weights.lambda1: must be in [0, 1], got {l1}"));
            }
        }
        if let Some(grid) = &self.weights.lambda1_grid {
            if grid.is_empty() {
                problems.push("weights.lambda1_grid: must not be empty".to_string());
            }
            for &l in grid {
                if !(0.0..=1.0).contains(&l) {
                    problems.push(format!("weights.lambda1_grid: entry {l} outside [0, 1]"));
                }
            }
        }
        if !(0.0..=1.0).contains(&self.weights.lambda2) {
            problems.push(format!(
                "weights.lambda2: must be in [0, 1], got {}",
                self.weights.lambda2
            ));
        }
        if self.simulation.trials == 0 {
            problems.push("simulation.trials: must be >= 1".to_string());
        }
        if self.feasibility.n_total_min > self.feasibility.n_total_max {
            problems.push(format!(
                "feasibility: n_total_min {} > n_total_max {}",
                self.feasibility.n_total_min, self.feasibility.n_total_max
            ));
        }
        if self.feasibility.n_total_step == 0 {
            problems.push("feasibility.n_total_step: must be >= 1".to_string());
        }
        if let Some(h) = self.field.half_side_m {
            if !(h > 0.0) {
                problems.push(format!("field.half_side_m: must be > 0, got {h}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }

    pub fn design_elevation_rad(&self) -> f64 {
        self.anchors.design_elevation_deg.to_radians()
    }

    pub fn range_error_params(&self) -> Result<RangeErrorParams> {
        RangeErrorParams::new(self.anchors.gamma)
    }

    pub fn ins_model(&self) -> Result<InsDivergenceModel> {
        InsDivergenceModel::new(
            self.ins.sigma0_sq,
            self.ins.beta1,
            self.ins.beta2,
            self.ins.distance_unit_m,
        )
    }

    pub fn leg(&self, distance_m: f64) -> Result<LegSampling> {
        LegSampling::new(
            self.kinematics.speed_mps,
            self.kinematics.slot_s,
            distance_m,
        )
    }

    pub fn coverage_spec(&self) -> Result<CoverageSpec> {
        CoverageSpec::new(self.anchors.comm_range_m, self.coverage.rule)
    }

    /// Raw (unresampled) profile from the built-in table or the CSV path.
    pub fn load_profile(&self) -> Result<SoundSpeedProfile> {
        match &self.profile.path {
            Some(path) => SoundSpeedProfile::from_csv_path(path),
            None => SoundSpeedProfile::by_name(&self.profile.name),
        }
    }

    /// Profile resampled onto the slab between sailing depth and anchor depth.
    pub fn slab_profile(&self) -> Result<SoundSpeedProfile> {
        self.load_profile()?.resample_slab(
            self.target.depth_m,
            self.anchors.anchor_depth_m,
            self.profile.layer_thickness_m,
        )
    }

    pub fn scenario_params(&self) -> Result<ScenarioParams> {
        Ok(ScenarioParams {
            side_km: self.region.side_km,
            n_total: self.anchors.n_total,
            anchor_depth_m: self.anchors.anchor_depth_m,
            target_depth_m: self.target.depth_m,
            design_elevation_rad: self.design_elevation_rad(),
            coverage: self.coverage_spec()?,
            step_m: self.traversal.step_m,
            layer_thickness_m: self.profile.layer_thickness_m,
        })
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            membership: self.simulation.membership,
            fix_value: self.simulation.fix_value,
        }
    }

    /// The lambda1 values `optimize` sweeps: the single value when set, the
    /// explicit grid otherwise, or the default 0.0..=1.0 grid in steps of 0.1.
    pub fn lambda1_values(&self) -> Vec<f64> {
        if let Some(l1) = self.weights.lambda1 {
            return vec![l1];
        }
        if let Some(grid) = &self.weights.lambda1_grid {
            return grid.clone();
        }
        (0..=10).map(|i| i as f64 / 10.0).collect()
    }

    /// Pretty JSON of the fully defaulted config, echoed into run outputs.
    pub fn to_pretty_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_yields_reference_defaults() {
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        assert_eq!(cfg.anchors.anchor_depth_m, 3000.0);
        assert_eq!(cfg.anchors.design_elevation_deg, 46.0);
        assert_eq!(cfg.anchors.comm_range_m, 5000.0);
        assert_eq!(cfg.anchors.gamma, 0.001);
        assert_eq!(cfg.target.depth_m, 500.0);
        assert_eq!(cfg.kinematics.speed_mps, 2.0);
        assert_eq!(cfg.ins.sigma0_sq, 0.01);
        assert_eq!(cfg.ins.beta1, 0.039);
        assert_eq!(cfg.ins.beta2, 0.053);
        assert_eq!(cfg.traversal.step_m, 100.0);
        assert_eq!(cfg.simulation.trials, 100);
    }

    #[test]
    fn roundtrip_through_effective_json() {
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        let echoed = cfg.to_pretty_json().unwrap();
        let again = ScenarioConfig::from_json(&echoed).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = ScenarioConfig::from_json("{\"regionn\": {}}").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn validation_reports_field_paths() {
        let err = ScenarioConfig::from_json("{\"traversal\": {\"step_m\": -5.0}}").unwrap_err();
        let Error::InvalidInput(msg) = err else {
            panic!("wrong error kind")
        };
        assert!(msg.contains("traversal.step_m"), "message was: {msg}");
    }

    #[test]
    fn lambda_grid_precedence() {
        let cfg = ScenarioConfig::from_json("{\"weights\": {\"lambda1\": 0.5}}").unwrap();
        assert_eq!(cfg.lambda1_values(), vec![0.5]);
        let cfg =
            ScenarioConfig::from_json("{\"weights\": {\"lambda1_grid\": [0.0, 1.0]}}").unwrap();
        assert_eq!(cfg.lambda1_values(), vec![0.0, 1.0]);
        let cfg = ScenarioConfig::from_json("{}").unwrap();
        assert_eq!(cfg.lambda1_values().len(), 11);
    }
}
