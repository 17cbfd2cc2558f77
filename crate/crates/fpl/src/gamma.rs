//! The frequency-dependent convergence rate `gamma(xi)`.
//!
//! For a wide two-layer ReLU network the rate is a two-term power law
//! `A/||xi||^(d+3) + B/||xi||^(d+1)`; a tabulated variant is the extension
//! point for other activation families (e.g. exponentially decaying rates
//! for smooth activations, for which no closed form is implemented).

use crate::error::{FplError, Result};
use crate::scalar::{norm, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum GammaSpec<F: Scalar> {
    /// `a/||xi||^(d+3) + b/||xi||^(d+1)`.
    PowerLaw { a: F, b: F, dim: usize },
    /// Piecewise-linear interpolation of `rate` against `||xi||`.
    Tabulated { freqs: Vec<F>, rates: Vec<F> },
}

impl<F: Scalar> GammaSpec<F> {
    pub fn power_law(a: F, b: F, dim: usize) -> Result<Self> {
        if a < F::zero() || b < F::zero() || !(a + b).is_normal() {
            return Err(FplError::InvalidSpec(
                "power-law rate needs a >= 0, b >= 0, a + b > 0".into(),
            ));
        }
        if dim == 0 {
            return Err(FplError::InvalidSpec("dimension must be positive".into()));
        }
        Ok(GammaSpec::PowerLaw { a, b, dim })
    }

    pub fn tabulated(freqs: Vec<F>, rates: Vec<F>) -> Result<Self> {
        if freqs.len() != rates.len() || freqs.len() < 2 {
            return Err(FplError::InvalidSpec(
                "tabulated rate needs >= 2 matching (freq, rate) pairs".into(),
            ));
        }
        if freqs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FplError::InvalidSpec("tabulated freqs must strictly increase".into()));
        }
        if freqs[0] < F::zero() {
            return Err(FplError::InvalidSpec("tabulated freqs must be nonnegative".into()));
        }
        if rates.iter().any(|r| *r <= F::zero() || !r.is_finite()) {
            return Err(FplError::InvalidSpec("tabulated rates must be strictly positive".into()));
        }
        Ok(GammaSpec::Tabulated { freqs, rates })
    }

    /// A rate obeying the low-frequency-first principle is non-increasing in
    /// `||xi||`. Power laws always comply; tables are checked.
    pub fn f_principle_compliant(&self) -> bool {
        match self {
            GammaSpec::PowerLaw { .. } => true,
            GammaSpec::Tabulated { rates, .. } => rates.windows(2).all(|w| w[1] <= w[0]),
        }
    }

    /// Evaluate the rate at frequency `xi`.
    pub fn eval(&self, xi: &[F]) -> Result<F> {
        self.eval_norm(norm(xi))
    }

    /// Evaluate at a precomputed frequency magnitude.
    pub fn eval_norm(&self, r: F) -> Result<F> {
        match self {
            GammaSpec::PowerLaw { a, b, dim } => {
                if r <= F::zero() {
                    return Err(FplError::Domain(
                        "power-law rate is singular at ||xi|| = 0".into(),
                    ));
                }
                let d = F::from_usize(*dim).unwrap();
                let three = F::of(3.0);
                Ok(*a * r.powf(-(d + three)) + *b * r.powf(-(d + F::one())))
            }
            GammaSpec::Tabulated { freqs, rates } => {
                if r < freqs[0] || r > *freqs.last().unwrap() {
                    return Err(FplError::Domain(format!(
                        "||xi|| = {r} outside tabulated range [{}, {}]",
                        freqs[0],
                        freqs.last().unwrap()
                    )));
                }
                let idx = match freqs.iter().position(|f| *f >= r) {
                    Some(0) => return Ok(rates[0]),
                    Some(i) => i,
                    None => unreachable!("range checked above"),
                };
                let (f0, f1) = (freqs[idx - 1], freqs[idx]);
                let t = (r - f0) / (f1 - f0);
                Ok(rates[idx - 1] * (F::one() - t) + rates[idx] * t)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = GammaSpec<f64>;

    #[test]
    fn power_law_unit_arguments() {
        let g = G::power_law(1.0, 0.0, 1).unwrap();
        assert_eq!(g.eval(&[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn power_law_b_term() {
        let g = G::power_law(0.0, 1.0, 1).unwrap();
        assert_eq!(g.eval(&[2.0]).unwrap(), 0.25);
    }

    #[test]
    fn power_law_mixed_3d() {
        let g = G::power_law(1.0, 1.0, 3).unwrap();
        let v = g.eval(&[2.0, 0.0, 0.0]).unwrap();
        assert!((v - 0.078125).abs() < 1e-15, "{v}");
    }

    #[test]
    fn power_law_singular_at_origin() {
        let g = G::power_law(1.0, 1.0, 2).unwrap();
        assert!(matches!(g.eval(&[0.0, 0.0]), Err(FplError::Domain(_))));
    }

    #[test]
    fn power_law_strictly_decreasing_on_rays() {
        let g = G::power_law(0.3, 2.0, 2).unwrap();
        let dir = [0.6, 0.8];
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let r = 0.05 * i as f64;
            let v = g.eval(&[dir[0] * r, dir[1] * r]).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn tabulated_interpolates_and_rejects_extrapolation() {
        let g = G::tabulated(vec![1.0, 2.0, 4.0], vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(g.eval(&[1.5]).unwrap(), 0.75);
        assert_eq!(g.eval(&[2.0]).unwrap(), 0.5);
        assert!(g.eval(&[8.0]).is_err());
        assert!(g.eval(&[0.5]).is_err());
        assert!(g.f_principle_compliant());
        let inc = G::tabulated(vec![1.0, 2.0], vec![0.5, 1.0]).unwrap();
        assert!(!inc.f_principle_compliant());
    }

    #[test]
    fn invalid_specs() {
        assert!(G::power_law(0.0, 0.0, 1).is_err());
        assert!(G::power_law(-1.0, 1.0, 1).is_err());
        assert!(G::tabulated(vec![1.0, 2.0], vec![1.0, 0.0]).is_err());
    }
}
