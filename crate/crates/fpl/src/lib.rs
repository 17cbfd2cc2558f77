//! Numerical laboratory for low-frequency-first training dynamics.
//!
//! The crate has four pillars:
//!
//! * [`lfp`] — a linear frequency-domain flow driven by a decaying rate
//!   `gamma(xi)`, integrated both on a spectral lattice and as an exact
//!   reduced flow on training-point residuals;
//! * [`spline`] — the closed-form steady state of that flow, computed as a
//!   conditionally positive-definite kernel interpolant (linear, cubic and
//!   mixed polyharmonic splines, Riesz kernels in general dimension);
//! * [`nn`] — a from-scratch two-layer ReLU network trainer (plus a deeper
//!   MLP) with antisymmetric initialization, full-batch gradient descent and
//!   empirical tangent-kernel extraction;
//! * [`spectral`] — nonuniform DFT diagnostics, per-frequency convergence
//!   tracking, FP-energy quadrature and the a-priori error bound.
//!
//! Everything is deterministic given a seed, and the [`scenario`] module
//! drives end-to-end experiment configs from the `fpl` binary.
//!
//! Core numerics are generic over the scalar type via [`scalar::Scalar`];
//! the solvers and the CLI use the [`Real`] (= `f64`) aliases below.

pub mod dataset;
pub mod error;
pub mod fourier;
pub mod gamma;
pub mod lattice;
pub mod lfp;
pub mod nn;
pub mod plot;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod spectral;
pub mod spline;

pub use error::{FplError, Result};
pub use scalar::Scalar;

/// Concrete scalar used by the solvers and the CLI.
pub type Real = f64;
/// Complex companion of [`Real`].
pub type CReal = num_complex::Complex<f64>;

/// [`dataset::Dataset`] over the default scalar.
pub type Dataset = dataset::Dataset<Real>;
/// [`gamma::GammaSpec`] over the default scalar.
pub type GammaSpec = gamma::GammaSpec<Real>;
/// [`lattice::FrequencyLattice`] over the default scalar.
pub type FrequencyLattice = lattice::FrequencyLattice<Real>;
