//! Closed-form steady states: conditionally positive-definite kernel
//! interpolation with linear/cubic/mixed polyharmonic kernels (Riesz kernels
//! for general dimension) and a polynomial tail.

mod energy;
mod solve;
mod weights;

pub use energy::{energy_comparison, fp_energy_of_interpolant, EnergyComparison};
pub use solve::{steady_state, KernelInterpolant};
pub use weights::{kernel_weights_from_stats, riesz_constant_cubic, riesz_constant_linear};

use serde::{Deserialize, Serialize};

use crate::error::{FplError, Result};
use crate::Real;

/// Mixed polyharmonic kernel `k(r) = c3 * r^3 - c1 * r`.
///
/// The sign of the linear term is folded in so that the assembled saddle
/// system is used as-is for linear, cubic and mixed kernels alike: with the
/// inverse-transform normalization of this crate, a rate
/// `A/||xi||^(d+3) + B/||xi||^(d+1)` has spatial kernel
/// `(A/c3(d)) ||x||^3 - (B/|c1(d)|) ||x||` plus an even polynomial absorbed
/// by the tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpdKernelSpec {
    pub dim: usize,
    /// weight of `||x||^3`
    pub c3: Real,
    /// weight of `||x||` (entering negatively)
    pub c1: Real,
    /// polynomial tail order: 1 = constants, 2 = affine
    pub m_poly: usize,
}

impl CpdKernelSpec {
    pub fn new(dim: usize, c3: Real, c1: Real) -> Result<Self> {
        let m_poly = if c3 > 0.0 { 2 } else { 1 };
        Self::with_poly_order(dim, c3, c1, m_poly)
    }

    pub fn with_poly_order(dim: usize, c3: Real, c1: Real, m_poly: usize) -> Result<Self> {
        if dim == 0 {
            return Err(FplError::InvalidSpec("kernel dimension must be positive".into()));
        }
        if c3 < 0.0 || c1 < 0.0 || c3 + c1 <= 0.0 {
            return Err(FplError::InvalidSpec(
                "kernel weights need c3 >= 0, c1 >= 0, c3 + c1 > 0".into(),
            ));
        }
        if !(1..=2).contains(&m_poly) {
            return Err(FplError::InvalidSpec("polynomial order must be 1 or 2".into()));
        }
        if c3 > 0.0 && m_poly < 2 {
            return Err(FplError::InvalidSpec(
                "the cubic term is CPD of order 2 and needs an affine tail".into(),
            ));
        }
        Ok(Self { dim, c3, c1, m_poly })
    }

    /// Radial profile at distance `r >= 0`.
    pub fn radial(&self, r: Real) -> Real {
        self.c3 * r * r * r - self.c1 * r
    }

    /// Number of polynomial tail coefficients.
    pub fn poly_terms(&self) -> usize {
        if self.m_poly == 1 {
            1
        } else {
            self.dim + 1
        }
    }
}
