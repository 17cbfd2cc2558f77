//! Kernel weights from initialization statistics.
//!
//! A rate `gamma(xi) = A/||xi||^(d+3) + B/||xi||^(d+1)` corresponds, through
//! the radial (Riesz) Fourier pairs
//! `F[||x||^s] = c_s(d) ||xi||^-(d+s)` with
//! `c_s(d) = 2^(s+d) pi^(d/2) Gamma((d+s)/2) / Gamma(-s/2)`,
//! to the spatial kernel `(A/c_3(d)) ||x||^3 + (B/c_1(d)) ||x||` modulo an
//! even polynomial absorbed by the tail. `c_1(d)` is negative
//! (`Gamma(-1/2) = -2 sqrt(pi)`), which is why the linear term enters
//! [`CpdKernelSpec`] with a folded sign. For d = 1 these reduce to the
//! textbook pairs `F[|x|] = -2/xi^2` and `F[|x|^3] = 12/xi^4`, i.e.
//! `c3 = A/12`, `c1 = B/2`.

use crate::error::{FplError, Result};
use crate::Real;

use super::CpdKernelSpec;

/// `Gamma(num/2)` for positive integer `num`, exactly.
fn gamma_half_integer(num: usize) -> Real {
    assert!(num >= 1);
    if num % 2 == 0 {
        // Gamma(k) = (k-1)!
        let k = num / 2;
        (1..k).map(|i| i as Real).product()
    } else {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
        let k = (num - 1) / 2;
        let mut v = std::f64::consts::PI.sqrt();
        for i in 1..=k {
            // (2i)(2i-1)/4i = (2i-1)/2
            v *= (2 * i - 1) as Real / 2.0;
        }
        v
    }
}

/// `|c_1(d)| = 2^d pi^((d-1)/2) Gamma((d+1)/2)`; d = 1 gives 2.
pub fn riesz_constant_linear(dim: usize) -> Real {
    (2.0 as Real).powi(dim as i32)
        * std::f64::consts::PI.powf((dim as Real - 1.0) / 2.0)
        * gamma_half_integer(dim + 1)
}

/// `c_3(d) = 3 * 2^(d+1) pi^((d-1)/2) Gamma((d+3)/2)`; d = 1 gives 12.
pub fn riesz_constant_cubic(dim: usize) -> Real {
    3.0 * (2.0 as Real).powi(dim as i32 + 1)
        * std::f64::consts::PI.powf((dim as Real - 1.0) / 2.0)
        * gamma_half_integer(dim + 3)
}

/// Map the rate statistics `A = <a^2 + r^2>`, `B = <a^2 r^2>` to the kernel
/// of the equivalent minimization problem.
pub fn kernel_weights_from_stats(a: Real, b: Real, dim: usize) -> Result<CpdKernelSpec> {
    if a < 0.0 || b < 0.0 || a + b <= 0.0 {
        return Err(FplError::InvalidSpec("need A >= 0, B >= 0, A + B > 0".into()));
    }
    if dim == 0 {
        return Err(FplError::InvalidSpec("dimension must be positive".into()));
    }
    let c3 = a / riesz_constant_cubic(dim);
    let c1 = b / riesz_constant_linear(dim);
    CpdKernelSpec::new(dim, c3, c1)
}
