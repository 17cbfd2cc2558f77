//! Per-frequency convergence tracking of checkpointed predictions.

use std::path::Path;

use num_complex::Complex;

use crate::error::{FplError, Result};
use crate::Real;

use super::profile::nudft;

/// Relative spectral error curves `delta(k, t)` at designated peaks, and the
/// first checkpoint time where each drops below the convergence threshold.
#[derive(Debug, Clone)]
pub struct ConvergenceCurves {
    pub peaks: Vec<Real>,
    pub times: Vec<Real>,
    /// `curves[p][t]` = relative error at peak `p`, checkpoint `t`.
    pub curves: Vec<Vec<Real>>,
    /// First time with error < threshold, per peak; `None` if never reached.
    pub tau: Vec<Option<Real>>,
    pub threshold: Real,
}

pub const CONVERGENCE_THRESHOLD: Real = 0.2;

/// `delta(k, t) = |F_h(k, t) - F_f*(k)| / |F_f*(k)|` at each designated peak.
///
/// All checkpoints must share the sample points; peaks where the target
/// amplitude is below 1e-12 are rejected.
pub fn convergence_per_frequency(
    checkpoint_predictions: &[Vec<Real>],
    times: &[Real],
    target_values: &[Real],
    points: &[Vec<Real>],
    direction: &[Real],
    peaks: &[Real],
) -> Result<ConvergenceCurves> {
    if checkpoint_predictions.len() != times.len() {
        return Err(FplError::Shape("one prediction vector per checkpoint time".into()));
    }
    if peaks.is_empty() {
        return Err(FplError::InvalidSpec("no peaks designated".into()));
    }
    let target = nudft(points, target_values, direction, peaks, "target")?;
    for (p, a) in peaks.iter().zip(&target.amplitudes) {
        if *a < 1e-12 {
            return Err(FplError::InvalidSpec(format!(
                "target amplitude at designated peak k = {p} is below 1e-12"
            )));
        }
    }
    let target_z: Vec<Complex<Real>> = target
        .amplitudes
        .iter()
        .zip(&target.phases)
        .map(|(&a, &p)| Complex::from_polar(a, p))
        .collect();

    let mut curves = vec![Vec::with_capacity(times.len()); peaks.len()];
    for preds in checkpoint_predictions {
        if preds.len() != points.len() {
            return Err(FplError::Shape("prediction length != point count".into()));
        }
        let prof = nudft(points, preds, direction, peaks, "checkpoint")?;
        for (p, curve) in curves.iter_mut().enumerate() {
            let z = Complex::from_polar(prof.amplitudes[p], prof.phases[p]);
            curve.push((z - target_z[p]).norm() / target_z[p].norm());
        }
    }
    let tau = curves
        .iter()
        .map(|curve| {
            curve
                .iter()
                .position(|d| *d < CONVERGENCE_THRESHOLD)
                .map(|i| times[i])
        })
        .collect();
    Ok(ConvergenceCurves {
        peaks: peaks.to_vec(),
        times: times.to_vec(),
        curves,
        tau,
        threshold: CONVERGENCE_THRESHOLD,
    })
}

impl ConvergenceCurves {
    /// CSV export: `t, delta_k{peak}...`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let mut header = vec!["t".to_string()];
        header.extend(self.peaks.iter().map(|k| format!("delta_k{k}")));
        wtr.write_record(&header)?;
        for (ti, t) in self.times.iter().enumerate() {
            let mut row = vec![format!("{t}")];
            row.extend(self.curves.iter().map(|c| format!("{}", c[ti])));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_predictions_have_zero_error() {
        let points: Vec<Vec<Real>> = (0..32).map(|i| vec![i as Real / 31.0]).collect();
        let target: Vec<Real> = points
            .iter()
            .map(|p| (2.0 * std::f64::consts::PI * 2.0 * p[0]).sin())
            .collect();
        let checkpoints = vec![target.clone(), target.clone()];
        let curves = convergence_per_frequency(
            &checkpoints,
            &[0.0, 1.0],
            &target,
            &points,
            &[1.0],
            &[2.0],
        )
        .unwrap();
        assert!(curves.curves[0].iter().all(|d| *d < 1e-12));
        assert_eq!(curves.tau[0], Some(0.0));
    }

    #[test]
    fn zero_amplitude_peak_rejected() {
        let points: Vec<Vec<Real>> = (0..16).map(|i| vec![i as Real / 15.0]).collect();
        let target = vec![0.0; 16];
        let err = convergence_per_frequency(
            &[target.clone()],
            &[0.0],
            &target,
            &points,
            &[1.0],
            &[1.0],
        );
        assert!(err.is_err());
    }

    #[test]
    fn diagonal_decay_orders_tau_by_rate() {
        // synthetic linear dynamics: each tone decays toward the target at
        // its own rate; tau ordering must match the rates analytically
        let n = 64;
        let points: Vec<Vec<Real>> = (0..n).map(|i| vec![i as Real / (n - 1) as Real]).collect();
        let tone = |k: Real, x: Real| (2.0 * std::f64::consts::PI * k * x).sin();
        let target: Vec<Real> =
            points.iter().map(|p| tone(1.0, p[0]) + tone(5.0, p[0])).collect();
        let (rate1, rate5) = (1.0, 0.04);
        let times: Vec<Real> = (0..500).map(|i| i as Real * 0.1).collect();
        let preds: Vec<Vec<Real>> = times
            .iter()
            .map(|t| {
                points
                    .iter()
                    .map(|p| {
                        (1.0 - (-rate1 * t).exp()) * tone(1.0, p[0])
                            + (1.0 - (-rate5 * t).exp()) * tone(5.0, p[0])
                    })
                    .collect()
            })
            .collect();
        let curves =
            convergence_per_frequency(&preds, &times, &target, &points, &[1.0], &[1.0, 5.0])
                .unwrap();
        let t1 = curves.tau[0].expect("low tone converges");
        let t5 = curves.tau[1].expect("high tone converges");
        // analytic: tau_k = -ln(threshold)/rate_k
        let a1 = -(CONVERGENCE_THRESHOLD.ln()) / rate1;
        let a5 = -(CONVERGENCE_THRESHOLD.ln()) / rate5;
        assert!(t1 < t5);
        assert!((t1 - a1).abs() <= 0.2, "t1 = {t1}, analytic {a1}");
        assert!((t5 - a5).abs() <= 0.2, "t5 = {t5}, analytic {a5}");
    }
}
