//! Exact reduced flow on training-point residuals.
//!
//! With the empirical measure, the frequency-domain dynamics close on the
//! training points into `dr/dt = -G r`, `G[j,i] = Gamma(x_j - x_i)/n`. The
//! solution is taken by symmetric eigendecomposition, with eigenvalues
//! clamped at zero to suppress `-1e-12`-scale noise. Accumulated kernel
//! coefficients `beta_i(t) = -(1/n) * integral_0^t r_i(s) ds` give the
//! off-sample prediction `h(x, t) = h_ini(x) + sum_i Gamma(x - x_i) beta_i(t)`.

use nalgebra::{DMatrix, DVector};

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::gamma::GammaSpec;
use crate::lattice::FrequencyLattice;
use crate::Real;

use super::kernel::{build_gram, SpatialKernel};
use super::trajectory::FlowTrajectory;

/// Eigenvalues below `-PSD_TOL * ||G||` fail the positive-semidefinite check.
const PSD_TOL: Real = 1e-8;

pub struct ReducedFlow {
    dataset: Dataset<Real>,
    kernel: SpatialKernel,
    /// Orthonormal eigenvectors of G (columns).
    basis: DMatrix<Real>,
    /// Eigenvalues of G, clamped at 0.
    rates: DVector<Real>,
    /// Initial residuals in the eigenbasis.
    r0_modes: DVector<Real>,
    r0: DVector<Real>,
}

impl ReducedFlow {
    /// Flow from the unbiased initial function `h_ini = 0`, i.e. `r(0) = -y`.
    pub fn new(
        dataset: &Dataset<Real>,
        spec: &GammaSpec<Real>,
        lattice: &FrequencyLattice<Real>,
    ) -> Result<Self> {
        let r0 = DVector::from_iterator(dataset.len(), dataset.values().iter().map(|y| -y));
        Self::with_residuals(dataset, spec, lattice, r0)
    }

    /// Flow from explicit initial residuals `r_i(0) = h_ini(x_i) - y_i`.
    pub fn with_residuals(
        dataset: &Dataset<Real>,
        spec: &GammaSpec<Real>,
        lattice: &FrequencyLattice<Real>,
        r0: DVector<Real>,
    ) -> Result<Self> {
        if r0.len() != dataset.len() {
            return Err(FplError::Shape("initial residual length != n".into()));
        }
        let kernel = SpatialKernel::new(spec, lattice)?;
        let gram = build_gram(dataset, &kernel);
        let scale = gram.norm();
        let eig = gram.symmetric_eigen();
        if eig.eigenvalues.iter().any(|l| *l < -PSD_TOL * scale) {
            return Err(FplError::Numerical(format!(
                "Gram matrix not PSD: min eigenvalue {}",
                eig.eigenvalues.min()
            )));
        }
        let rates = eig.eigenvalues.map(|l| l.max(0.0));
        let r0_modes = eig.eigenvectors.transpose() * &r0;
        Ok(Self {
            dataset: dataset.clone(),
            kernel,
            basis: eig.eigenvectors,
            rates,
            r0_modes,
            r0,
        })
    }

    pub fn kernel(&self) -> &SpatialKernel {
        &self.kernel
    }

    pub fn eigenvalues(&self) -> &DVector<Real> {
        &self.rates
    }

    /// Residual vector at time `t`: `exp(-G t) r(0)`.
    pub fn residuals_at(&self, t: Real) -> DVector<Real> {
        let decayed = DVector::from_iterator(
            self.rates.len(),
            self.rates.iter().zip(self.r0_modes.iter()).map(|(&l, &m)| m * (-l * t).exp()),
        );
        &self.basis * decayed
    }

    /// Accumulated coefficients `beta(t) = -(1/n) * integral_0^t r(s) ds`,
    /// in closed form per eigenmode: `(1 - exp(-l t)) / l -> t` as `l -> 0`.
    pub fn beta_at(&self, t: Real) -> DVector<Real> {
        let n = self.dataset.len() as Real;
        let integrated = DVector::from_iterator(
            self.rates.len(),
            self.rates
                .iter()
                .zip(self.r0_modes.iter())
                .map(|(&l, &m)| m * integral_factor(l, t)),
        );
        (&self.basis * integrated) * (-1.0 / n)
    }

    /// Steady-state coefficients (t -> infinity) via pseudo-inverse on the
    /// nonzero eigenmodes.
    pub fn beta_steady(&self) -> DVector<Real> {
        let n = self.dataset.len() as Real;
        let lmax = self.rates.max();
        let cutoff = lmax * 1e-12;
        let integrated = DVector::from_iterator(
            self.rates.len(),
            self.rates
                .iter()
                .zip(self.r0_modes.iter())
                .map(|(&l, &m)| if l > cutoff { m / l } else { 0.0 }),
        );
        (&self.basis * integrated) * (-1.0 / n)
    }

    /// Off-sample prediction with `h_ini = 0`.
    pub fn predict(&self, x: &[Real], t: Real) -> Real {
        self.predict_with_beta(x, &self.beta_at(t))
    }

    pub fn predict_steady(&self, x: &[Real]) -> Real {
        self.predict_with_beta(x, &self.beta_steady())
    }

    pub fn predict_with_beta(&self, x: &[Real], beta: &DVector<Real>) -> Real {
        self.dataset
            .points()
            .iter()
            .zip(beta.iter())
            .map(|(p, &b)| {
                let disp: Vec<Real> = x.iter().zip(p).map(|(a, c)| a - c).collect();
                self.kernel.eval(&disp) * b
            })
            .sum()
    }

    /// Evolve to `t_end`, recording `n_checkpoints + 1` states (including the
    /// initial one). Loss is `||r||^2 / 2n`.
    pub fn evolve(&self, t_end: Real, n_checkpoints: usize) -> Result<FlowTrajectory> {
        if t_end <= 0.0 || n_checkpoints == 0 {
            return Err(FplError::InvalidSpec("need t_end > 0 and n_checkpoints >= 1".into()));
        }
        let n = self.dataset.len() as Real;
        let mut times = Vec::with_capacity(n_checkpoints + 1);
        let mut losses = Vec::with_capacity(n_checkpoints + 1);
        let mut residuals = Vec::with_capacity(n_checkpoints + 1);
        for k in 0..=n_checkpoints {
            let t = t_end * k as Real / n_checkpoints as Real;
            let r = if k == 0 { self.r0.clone() } else { self.residuals_at(t) };
            if r.iter().any(|v| !v.is_finite()) {
                return Err(FplError::Numerical(format!(
                    "non-finite residual at t = {t} (n = {}, max rate {})",
                    self.dataset.len(),
                    self.rates.max()
                )));
            }
            times.push(t);
            losses.push(r.norm_squared() / (2.0 * n));
            residuals.push(r.as_slice().to_vec());
        }
        FlowTrajectory::new(times, losses, residuals, None)
    }
}

/// `(1 - exp(-l t)) / l`, stable as `l t -> 0`.
fn integral_factor(l: Real, t: Real) -> Real {
    let lt = l * t;
    if lt.abs() < 1e-8 {
        t * (1.0 - lt / 2.0 + lt * lt / 6.0)
    } else {
        (1.0 - (-lt).exp()) / l
    }
}
