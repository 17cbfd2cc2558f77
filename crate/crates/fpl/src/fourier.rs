//! Empirical (measure-weighted) Fourier transform.
//!
//! Convention used crate-wide: forward kernel `exp(-i x.xi)` with no 2*pi in
//! the exponent; the inverse transform carries `(2*pi)^-d`. The diagnostics
//! in [`crate::spectral`] additionally use a cycles convention `xi = 2*pi*k`
//! and convert explicitly at the boundary.

use num_complex::Complex;

use crate::error::{FplError, Result};
use crate::scalar::{dot, Scalar};

/// `(1/n) * sum_i values_i * exp(-i xi . x_i)` — the transform of the
/// residual field against the empirical measure `rho = sum_i delta(x-x_i)/n`.
pub fn empirical_transform<F: Scalar>(
    values: &[F],
    points: &[Vec<F>],
    xi: &[F],
) -> Result<Complex<F>> {
    if values.len() != points.len() {
        return Err(FplError::Shape(format!(
            "{} values vs {} points",
            values.len(),
            points.len()
        )));
    }
    let mut acc = Complex::new(F::zero(), F::zero());
    for (v, x) in values.iter().zip(points) {
        let phase = -dot(xi, x);
        acc = acc + Complex::new(*v * phase.cos(), *v * phase.sin());
    }
    let n = F::from_usize(values.len()).unwrap();
    Ok(acc / n)
}
