//! Inertial dead-reckoning drift: exponential divergence of the per-axis
//! position-error variance with traveled distance, leg-averaged navigation
//! error, and a least-squares fitter for the divergence coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of `sigma^2(dp) = sigma0_sq + beta1 * exp(beta2 * dp / unit)`.
///
/// `beta2` is dimensioned per `distance_unit_m` meters; the default unit of
/// 1000 m keeps multi-kilometer legs finite with the usual fitted magnitudes.
/// Note the model is discontinuous at `dp = 0` (variance `sigma0_sq + beta1`,
/// not `sigma0_sq`); that is a property of the divergence law itself and is
/// kept as written.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsDivergenceModel {
    /// Initial per-axis position variance, m².
    pub sigma0_sq: f64,
    /// Divergence amplitude, m².
    pub beta1: f64,
    /// Divergence rate per `distance_unit_m`.
    pub beta2: f64,
    /// Meters per unit of the exponent argument.
    pub distance_unit_m: f64,
}

impl InsDivergenceModel {
    pub fn new(sigma0_sq: f64, beta1: f64, beta2: f64, distance_unit_m: f64) -> Result<Self> {
        if !(sigma0_sq >= 0.0 && beta1 >= 0.0 && beta2 >= 0.0) || !(distance_unit_m > 0.0) {
            return Err(Error::InvalidInput(format!(
                "bad divergence model: sigma0_sq {sigma0_sq}, beta1 {beta1}, beta2 {beta2}, unit {distance_unit_m}"
            )));
        }
        Ok(Self {
            sigma0_sq,
            beta1,
            beta2,
            distance_unit_m,
        })
    }

    /// Per-axis position-error variance after `delta_p_m` meters without a fix.
    /// Overflow saturates to `+inf`; consumers report it as `Diverged`.
    pub fn position_variance(&self, delta_p_m: f64) -> f64 {
        if self.beta1 == 0.0 {
            // Degenerate model: constant variance regardless of the exponent.
            return self.sigma0_sq;
        }
        self.sigma0_sq + self.beta1 * (self.beta2 * delta_p_m / self.distance_unit_m).exp()
    }
}

impl Default for InsDivergenceModel {
    fn default() -> Self {
        Self {
            sigma0_sq: 0.01,
            beta1: 0.039,
            beta2: 0.053,
            distance_unit_m: 1000.0,
        }
    }
}

/// Discretization of one straight navigation leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegSampling {
    pub speed_mps: f64,
    pub slot_s: f64,
    pub distance_m: f64,
}

impl LegSampling {
    pub fn new(speed_mps: f64, slot_s: f64, distance_m: f64) -> Result<Self> {
        if !(speed_mps > 0.0 && slot_s > 0.0 && distance_m >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "bad leg sampling: speed {speed_mps}, slot {slot_s}, distance {distance_m}"
            )));
        }
        Ok(Self {
            speed_mps,
            slot_s,
            distance_m,
        })
    }

    /// Same leg with a different length.
    pub fn with_distance(&self, distance_m: f64) -> Result<Self> {
        Self::new(self.speed_mps, self.slot_s, distance_m)
    }

    /// Arc-length spacing between samples.
    pub fn step_m(&self) -> f64 {
        self.speed_mps * self.slot_s
    }

    /// Number of positioning samples: `max(1, floor(distance / (speed * slot)))`.
    pub fn sample_count(&self) -> usize {
        ((self.distance_m / self.step_m()).floor() as usize).max(1)
    }
}

/// Horizontal axes that accumulate drift on a leg (the depth axis is held by
/// the pressure sensor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axes {
    X,
    Y,
    Both,
}

impl Axes {
    pub fn count(&self) -> usize {
        match self {
            Axes::X | Axes::Y => 1,
            Axes::Both => 2,
        }
    }
}

/// Mean over the leg's samples of the summed active-axis variances, each axis
/// progressing `n * speed * slot` meters per sample.
pub fn leg_error_expectation(
    model: &InsDivergenceModel,
    leg: &LegSampling,
    axes: Axes,
) -> Result<f64> {
    let n = leg.sample_count();
    let step = leg.step_m();
    let mut total = 0.0;
    for k in 1..=n {
        let dist = k as f64 * step;
        let per_axis = model.position_variance(dist);
        if !per_axis.is_finite() {
            return Err(Error::Diverged);
        }
        total += axes.count() as f64 * per_axis;
    }
    Ok(total / n as f64)
}

/// Result of [`fit_divergence`]: the recovered model (with `distance_unit_m`
/// of 1, i.e. `beta2` in the units of the input `delta_p`) and the residual
/// 2-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceFit {
    pub model: InsDivergenceModel,
    pub residual: f64,
}

/// Profile out the affine parameters for a fixed `beta2`: least-squares
/// `(sigma0_sq, beta1)` for `y = sigma0_sq + beta1 * exp(beta2 * x)`.
fn profiled_affine(series: &[(f64, f64)], beta2: f64) -> (f64, f64, f64) {
    let n = series.len() as f64;
    let mut se = 0.0;
    let mut sy = 0.0;
    let mut see = 0.0;
    let mut sey = 0.0;
    for &(x, y) in series {
        let e = (beta2 * x).exp();
        se += e;
        sy += y;
        see += e * e;
        sey += e * y;
    }
    let denom = n * see - se * se;
    let (sigma0_sq, beta1) = if denom.abs() < 1e-12 * n * see.max(1.0) {
        // Basis effectively constant: the split is unidentifiable, park
        // everything in the offset.
        (sy / n, 0.0)
    } else {
        let beta1 = (n * sey - se * sy) / denom;
        let sigma0 = (sy - beta1 * se) / n;
        (sigma0, beta1)
    };
    let mut sse = 0.0;
    for &(x, y) in series {
        let r = y - sigma0_sq - beta1 * (beta2 * x).exp();
        sse += r * r;
    }
    (sigma0_sq, beta1, sse)
}

fn sse_of(series: &[(f64, f64)], sigma0_sq: f64, beta1: f64, beta2: f64) -> f64 {
    series
        .iter()
        .map(|&(x, y)| {
            let r = y - sigma0_sq - beta1 * (beta2 * x).exp();
            r * r
        })
        .sum()
}

/// Gauss-Newton refinement over `(beta1, beta2)` with `sigma0_sq` profiled out
/// linearly at every step. Returns `None` when the iteration degenerates.
fn gauss_newton(series: &[(f64, f64)], mut beta2: f64) -> Option<(f64, f64, f64, f64)> {
    let n = series.len() as f64;
    let mut lambda = 1e-6;
    let (mut sigma0, mut beta1, mut sse) = profiled_affine(series, beta2);
    beta1 = beta1.max(0.0);
    for _ in 0..200 {
        // Residuals and Jacobian with the profiled offset folded in.
        let exps: Vec<f64> = series.iter().map(|&(x, _)| (beta2 * x).exp()).collect();
        let mean_e = exps.iter().sum::<f64>() / n;
        let mean_xe = series
            .iter()
            .zip(&exps)
            .map(|(&(x, _), &e)| x * e)
            .sum::<f64>()
            / n;
        let mut jtj = [[0.0f64; 2]; 2];
        let mut jtr = [0.0f64; 2];
        for (&(x, y), &e) in series.iter().zip(&exps) {
            let r = y - sigma0 - beta1 * e;
            let j1 = e - mean_e;
            let j2 = beta1 * (x * e - mean_xe);
            jtj[0][0] += j1 * j1;
            jtj[0][1] += j1 * j2;
            jtj[1][1] += j2 * j2;
            jtr[0] += j1 * r;
            jtr[1] += j2 * r;
        }
        jtj[1][0] = jtj[0][1];
        let mut improved = false;
        for _ in 0..20 {
            let a00 = jtj[0][0] + lambda;
            let a11 = jtj[1][1] + lambda;
            let det = a00 * a11 - jtj[0][1] * jtj[1][0];
            if det.abs() < 1e-300 || !det.is_finite() {
                return None;
            }
            let d1 = (jtr[0] * a11 - jtj[0][1] * jtr[1]) / det;
            let d2 = (a00 * jtr[1] - jtj[1][0] * jtr[0]) / det;
            let b1_new = (beta1 + d1).max(0.0);
            let b2_new = (beta2 + d2).max(0.0);
            let (s_new, b1_prof, sse_new) = {
                let (s, _, _) = profiled_affine_fixed_beta1(series, b1_new, b2_new);
                (s, b1_new, sse_of(series, s, b1_new, b2_new))
            };
            if sse_new.is_finite() && sse_new <= sse {
                let step_norm = (d1 * d1 + d2 * d2).sqrt();
                sigma0 = s_new;
                beta1 = b1_prof;
                beta2 = b2_new;
                let converged = sse - sse_new <= 1e-15 * (sse + 1e-30) || step_norm < 1e-12;
                sse = sse_new;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if converged {
                    return Some((sigma0, beta1, beta2, sse));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // Damping saturated without progress: accept the current point.
            return Some((sigma0, beta1, beta2, sse));
        }
    }
    Some((sigma0, beta1, beta2, sse))
}

/// Profiled offset for fixed `(beta1, beta2)`.
fn profiled_affine_fixed_beta1(series: &[(f64, f64)], beta1: f64, beta2: f64) -> (f64, f64, f64) {
    let n = series.len() as f64;
    let sigma0 = series
        .iter()
        .map(|&(x, y)| y - beta1 * (beta2 * x).exp())
        .sum::<f64>()
        / n;
    (sigma0, beta1, beta2)
}

/// Fit `sigma0_sq + beta1 * exp(beta2 * dp)` to `(delta_p, variance)` samples.
///
/// Initialization scans 20 log-spaced `beta2` values in `[0.001, 1]`, solving
/// the affine parameters linearly at each; Gauss-Newton then refines from the
/// best starts.
pub fn fit_divergence(series: &[(f64, f64)]) -> Result<DivergenceFit> {
    if series.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: series.len(),
        });
    }
    let mut seen = series.to_vec();
    seen.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for pair in seen.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::InvalidInput(format!(
                "duplicate delta_p value {}",
                pair[0].0
            )));
        }
    }
    for &(x, y) in series {
        if !x.is_finite() || !y.is_finite() || x < 0.0 {
            return Err(Error::InvalidInput(format!("bad sample ({x}, {y})")));
        }
    }

    let grid: Vec<f64> = (0..20)
        .map(|i| {
            let t = i as f64 / 19.0;
            10f64.powf(-3.0 + 3.0 * t) // 1e-3 .. 1
        })
        .collect();
    let mut starts: Vec<(f64, f64, f64, f64)> = grid
        .iter()
        .map(|&b2| {
            let (s, b1, sse) = profiled_affine(series, b2);
            (s, b1.max(0.0), b2, sse)
        })
        .collect();
    starts.sort_by(|a, b| a.3.partial_cmp(&b.3).unwrap());

    let mut best: Option<(f64, f64, f64, f64)> = None;
    for &(_, _, b2, _) in starts.iter().take(5) {
        if let Some(candidate) = gauss_newton(series, b2) {
            let better = match best {
                None => true,
                Some(current) => candidate.3 < current.3,
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    let Some((sigma0, beta1, beta2, sse)) = best else {
        return Err(Error::FitDiverged);
    };
    if !sse.is_finite() {
        return Err(Error::FitDiverged);
    }
    let model = InsDivergenceModel::new(sigma0.max(0.0), beta1.max(0.0), beta2.max(0.0), 1.0)?;
    Ok(DivergenceFit {
        model,
        residual: sse.sqrt(),
    })
}
