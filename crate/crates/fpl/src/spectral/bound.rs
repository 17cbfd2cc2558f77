//! A-priori generalization bound for low-frequency-dominant targets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{FplError, Result};
use crate::Real;

/// Evaluation of the a-priori error bound
/// `E_gamma(f*)/sqrt(n) * C_gamma * (2 + 4*sqrt(2*log(4/delta)))`,
/// optionally paired with a measured test error for side-by-side reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub e_star: Real,
    pub n: usize,
    pub delta: Real,
    pub c_gamma: Real,
    pub bound: Real,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_error: Option<Real>,
}

/// Literal evaluation of the bound formula. `C_gamma` is a configured
/// constant (no closed form is available); callers should rely on the
/// bound's scaling in `n` and `delta`, not its absolute value.
pub fn generalization_bound(
    e_star: Real,
    n: usize,
    delta: Real,
    c_gamma: Real,
) -> Result<BoundReport> {
    if n == 0 {
        return Err(FplError::Domain("n must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(FplError::Domain(format!("delta must lie in (0,1), got {delta}")));
    }
    if c_gamma <= 0.0 {
        return Err(FplError::Domain(format!("C_gamma must be positive, got {c_gamma}")));
    }
    if e_star < 0.0 || !e_star.is_finite() {
        return Err(FplError::Domain(format!("E* must be finite and >= 0, got {e_star}")));
    }
    let bound = e_star / (n as Real).sqrt() * c_gamma * (2.0 + 4.0 * (2.0 * (4.0 / delta).ln()).sqrt());
    Ok(BoundReport {
        e_star,
        n,
        delta,
        c_gamma,
        bound,
        measured_error: None,
    })
}

impl BoundReport {
    pub fn with_measured_error(mut self, mse: Real) -> Self {
        self.measured_error = Some(mse);
        self
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_energy_gives_zero_bound() {
        let r = generalization_bound(0.0, 10, 0.1, 1.0).unwrap();
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn quadrupling_n_halves_bound() {
        let a = generalization_bound(3.0, 25, 0.05, 2.0).unwrap().bound;
        let b = generalization_bound(3.0, 100, 0.05, 2.0).unwrap().bound;
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-14);
    }

    #[test]
    fn frozen_example() {
        // (1/10)*(2 + 4*sqrt(2*ln 80)) evaluated independently
        let r = generalization_bound(1.0, 100, 0.05, 1.0).unwrap();
        assert_relative_eq!(r.bound, 1.3841657498406388, max_relative = 1e-12);
        assert!((r.bound - 1.383).abs() < 2e-3);
    }

    #[test]
    fn monotone_in_delta_and_n() {
        let base = generalization_bound(1.0, 50, 0.1, 1.0).unwrap().bound;
        let tighter = generalization_bound(1.0, 50, 0.01, 1.0).unwrap().bound;
        let more_data = generalization_bound(1.0, 200, 0.1, 1.0).unwrap().bound;
        assert!(tighter > base);
        assert!(more_data < base);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(generalization_bound(1.0, 0, 0.1, 1.0).is_err());
        assert!(generalization_bound(1.0, 10, 0.0, 1.0).is_err());
        assert!(generalization_bound(1.0, 10, 1.0, 1.0).is_err());
        assert!(generalization_bound(1.0, 10, 0.1, 0.0).is_err());
        assert!(generalization_bound(-1.0, 10, 0.1, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = generalization_bound(1.0, 100, 0.05, 1.0)
            .unwrap()
            .with_measured_error(0.2);
        let s = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.measured_error, Some(0.2));
        assert_eq!(back.bound, r.bound);
    }
}
