//! Monte-Carlo-style error decay of the kernel steady state vs sample count.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::rng::RandomSource;
use crate::spline::{steady_state, CpdKernelSpec};
use crate::Real;

/// Fitted log-log decay of mean-square generalization error vs `n`.
///
/// `slope` is `None` when the errors are numerically zero (e.g. the target is
/// exactly representable); such runs are reported as degenerate rather than
/// failed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n_values: Vec<usize>,
    /// Mean-square error averaged over trials, per `n`.
    pub mean_mse: Vec<Real>,
    /// Per-trial MSE values (`per_trial[i][t]` for `n_values[i]`).
    pub per_trial: Vec<Vec<Real>>,
    pub slope: Option<Real>,
    /// Bootstrap 95% interval on the slope (percentile over trial resampling).
    pub slope_ci: Option<(Real, Real)>,
    pub degenerate: bool,
}

const DEGENERATE_MSE: Real = 1e-24;
const BOOTSTRAP_RESAMPLES: usize = 200;

/// For each `n`: draw `trials` standard-normal sample sets of the 1-d target,
/// solve the kernel steady state, and measure the mean-square error under the
/// standard normal measure (dense Gauss-weighted grid on [-5, 5]). Fits the
/// slope of `log(mean MSE)` against `log n`.
pub fn error_vs_n_scaling(
    target: &dyn Fn(Real) -> Real,
    kernel: &CpdKernelSpec,
    n_values: &[usize],
    trials: usize,
    source: &RandomSource,
) -> Result<ScalingReport> {
    if kernel.dim != 1 {
        return Err(FplError::InvalidSpec("scaling study is one-dimensional".into()));
    }
    if n_values.len() < 4 {
        return Err(FplError::InvalidSpec("need at least 4 sample counts".into()));
    }
    if trials < 10 {
        return Err(FplError::InvalidSpec("need at least 10 trials per sample count".into()));
    }
    if n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] < 2 {
        return Err(FplError::InvalidSpec("sample counts must be >= 2 and strictly increasing".into()));
    }

    // quadrature grid for E_{x ~ N(0,1)}[(h - f*)^2]
    let grid_n = 801usize;
    let (lo, hi) = (-5.0, 5.0);
    let dx = (hi - lo) / (grid_n - 1) as Real;
    let grid: Vec<Real> = (0..grid_n).map(|i| lo + i as Real * dx).collect();
    let weights: Vec<Real> = grid
        .iter()
        .map(|&x| (-(x * x) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt() * dx)
        .collect();
    let target_on_grid: Vec<Real> = grid.iter().map(|&x| target(x)).collect();

    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut per_trial = Vec::with_capacity(n_values.len());
    for (ni, &n) in n_values.iter().enumerate() {
        let mut trial_mse = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut rng = source.stream(((ni as u64) << 32) | t as u64);
            let dataset = loop {
                let pts: Vec<Vec<Real>> =
                    (0..n).map(|_| vec![normal.sample(&mut rng)]).collect();
                match Dataset::from_fn(pts, |x| target(x[0])) {
                    Ok(d) => break d,
                    Err(_) => continue, // coincident draw; resample
                }
            };
            let interp = steady_state(&dataset, kernel)?;
            let mse: Real = grid
                .iter()
                .zip(&weights)
                .zip(&target_on_grid)
                .map(|((x, &w), &f)| {
                    let e = interp.evaluate(std::slice::from_ref(x)) - f;
                    w * e * e
                })
                .sum();
            trial_mse.push(mse);
        }
        per_trial.push(trial_mse);
    }
    let mean_mse: Vec<Real> = per_trial
        .iter()
        .map(|t| t.iter().sum::<Real>() / t.len() as Real)
        .collect();

    if mean_mse.iter().any(|&m| m < DEGENERATE_MSE) {
        return Ok(ScalingReport {
            n_values: n_values.to_vec(),
            mean_mse,
            per_trial,
            slope: None,
            slope_ci: None,
            degenerate: true,
        });
    }

    let log_n: Vec<Real> = n_values.iter().map(|&n| (n as Real).ln()).collect();
    let slope = fit_slope(&log_n, &mean_mse.iter().map(|m| m.ln()).collect::<Vec<_>>());

    // percentile bootstrap over trials, per n, preserving the n structure
    let mut boot_rng = source.split("scaling-bootstrap").rng();
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let log_means: Vec<Real> = per_trial
            .iter()
            .map(|trials_for_n| {
                let m: Real = (0..trials_for_n.len())
                    .map(|_| trials_for_n[boot_rng.gen_range(0..trials_for_n.len())])
                    .sum::<Real>()
                    / trials_for_n.len() as Real;
                m.max(DEGENERATE_MSE).ln()
            })
            .collect();
        slopes.push(fit_slope(&log_n, &log_means));
    }
    slopes.sort_by(|a, b| a.total_cmp(b));
    let ci = (
        slopes[(BOOTSTRAP_RESAMPLES as f64 * 0.025) as usize],
        slopes[(BOOTSTRAP_RESAMPLES as f64 * 0.975) as usize - 1],
    );

    Ok(ScalingReport {
        n_values: n_values.to_vec(),
        mean_mse,
        per_trial,
        slope: Some(slope),
        slope_ci: Some(ci),
        degenerate: false,
    })
}

fn fit_slope(xs: &[Real], ys: &[Real]) -> Real {
    let n = xs.len() as Real;
    let mx = xs.iter().sum::<Real>() / n;
    let my = ys.iter().sum::<Real>() / n;
    let sxy: Real = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: Real = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

impl ScalingReport {
    pub fn write_json(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }
}
