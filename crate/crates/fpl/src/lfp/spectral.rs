//! Explicit lattice integrator with per-frequency diagnostics.
//!
//! The field evolved on the lattice is the increment `dhat = F[h - h_ini]`,
//! which starts at zero and stays lattice-representable; the target enters
//! only through its values at the training points, so distribution-valued
//! spectra (parity targets, delta trains) never need a lattice representation.
//! Snapshots report `uhat = dhat - F[y rho]`, the residual spectrum as seen
//! through the empirical measure.

use num_complex::Complex;

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::fourier::empirical_transform;
use crate::gamma::GammaSpec;
use crate::lattice::FrequencyLattice;
use crate::scalar::dot;
use crate::{CReal, Real};

use super::kernel::{build_gram, SpatialKernel};
use super::trajectory::{FlowTrajectory, SpectralSnapshots};

/// Conjugate-symmetry drift tolerated on the evolved field.
const SYMMETRY_TOL: Real = 1e-10;

#[derive(Debug, Clone)]
pub struct SpectralState {
    /// Lattice-representable part of `uhat` (the increment since t = 0).
    pub dhat: Vec<CReal>,
    pub time: Real,
}

pub struct SpectralFlow {
    dataset: Dataset<Real>,
    lattice: FrequencyLattice<Real>,
    gammas: Vec<Real>,
    /// index of the node at -xi for each node at +xi
    conj_pairs: Vec<usize>,
    /// quadrature prefactor (2 pi)^-d * d_xi^d
    inv_prefactor: Real,
    /// largest eigenvalue of the induced Gram (explicit-Euler stability)
    pub gram_spectral_radius: Real,
    /// empirical target spectrum F[y rho] per node
    target_rho: Vec<CReal>,
}

impl SpectralFlow {
    pub fn new(
        dataset: &Dataset<Real>,
        spec: &GammaSpec<Real>,
        lattice: &FrequencyLattice<Real>,
    ) -> Result<Self> {
        if dataset.dim() != lattice.dim() {
            return Err(FplError::Shape("dataset/lattice dimension mismatch".into()));
        }
        let mut gammas = Vec::with_capacity(lattice.len());
        for node in lattice.nodes() {
            gammas.push(spec.eval(node)?);
        }
        let conj_pairs = conjugate_pairs(lattice)?;
        let kernel = SpatialKernel::new(spec, lattice)?;
        let gram = build_gram(dataset, &kernel);
        let radius = power_iteration_radius(&gram);
        let inv_prefactor = lattice.cell_volume()
            / (2.0 * std::f64::consts::PI).powi(lattice.dim() as i32);
        let mut target_rho = Vec::with_capacity(lattice.len());
        for node in lattice.nodes() {
            target_rho.push(empirical_transform(dataset.values(), dataset.points(), node)?);
        }
        Ok(Self {
            dataset: dataset.clone(),
            lattice: lattice.clone(),
            gammas,
            conj_pairs,
            inv_prefactor,
            gram_spectral_radius: radius,
            target_rho,
        })
    }

    pub fn initial_state(&self) -> SpectralState {
        SpectralState {
            dhat: vec![Complex::new(0.0, 0.0); self.lattice.len()],
            time: 0.0,
        }
    }

    /// Largest explicit-Euler step accepted by [`Self::evolve`].
    pub fn stable_dt(&self) -> Real {
        1.0 / self.gram_spectral_radius
    }

    /// Default step: half the stability bound.
    pub fn default_dt(&self) -> Real {
        0.5 * self.stable_dt()
    }

    /// Inverse-transform the increment field at a spatial point.
    fn increment_at(&self, dhat: &[CReal], x: &[Real]) -> Real {
        let mut sum = 0.0;
        for (node, u) in self.lattice.nodes().iter().zip(dhat) {
            let phase = dot(node, x);
            // real part of u * exp(i xi . x); imaginary part cancels by symmetry
            sum += u.re * phase.cos() - u.im * phase.sin();
        }
        self.inv_prefactor * sum
    }

    /// Residuals at the training points for a given increment field
    /// (`h_ini = 0`, so `u(x_i) = increment(x_i) - y_i`).
    pub fn residuals(&self, state: &SpectralState) -> Vec<Real> {
        self.dataset
            .points()
            .iter()
            .zip(self.dataset.values())
            .map(|(p, y)| self.increment_at(&state.dhat, p) - y)
            .collect()
    }

    /// Explicit-Euler evolution recording a checkpoint every
    /// `checkpoint_every` steps (plus the initial state).
    pub fn evolve(
        &self,
        state: &mut SpectralState,
        dt: Real,
        steps: usize,
        checkpoint_every: usize,
    ) -> Result<FlowTrajectory> {
        if dt <= 0.0 || steps == 0 || checkpoint_every == 0 {
            return Err(FplError::InvalidSpec("need dt > 0, steps >= 1, checkpoint_every >= 1".into()));
        }
        if dt > self.stable_dt() * (1.0 + 1e-12) {
            return Err(FplError::Numerical(format!(
                "explicit step dt = {dt} exceeds stability bound {}",
                self.stable_dt()
            )));
        }
        let n = self.dataset.len() as Real;
        let mut times = Vec::new();
        let mut losses = Vec::new();
        let mut residual_rows = Vec::new();
        let mut uhat_rows = Vec::new();
        let mut urho_rows = Vec::new();

        let record = |state: &SpectralState,
                          res: &[Real],
                          urho: &[CReal],
                          times: &mut Vec<Real>,
                          losses: &mut Vec<Real>,
                          residual_rows: &mut Vec<Vec<Real>>,
                          uhat_rows: &mut Vec<Vec<CReal>>,
                          urho_rows: &mut Vec<Vec<CReal>>| {
            times.push(state.time);
            losses.push(res.iter().map(|r| r * r).sum::<Real>() / (2.0 * n));
            residual_rows.push(res.to_vec());
            uhat_rows.push(
                state
                    .dhat
                    .iter()
                    .zip(&self.target_rho)
                    .map(|(d, f)| d - f)
                    .collect(),
            );
            urho_rows.push(urho.to_vec());
        };

        let res0 = self.residuals(state);
        let urho0 = self.empirical_spectrum(&res0)?;
        record(
            state, &res0, &urho0, &mut times, &mut losses, &mut residual_rows,
            &mut uhat_rows, &mut urho_rows,
        );

        for step in 1..=steps {
            let res = self.residuals(state);
            if res.iter().any(|r| !r.is_finite()) {
                return Err(FplError::Numerical(format!(
                    "non-finite residual at step {step} (t = {})",
                    state.time
                )));
            }
            let urho = self.empirical_spectrum(&res)?;
            for ((d, g), u) in state.dhat.iter_mut().zip(&self.gammas).zip(&urho) {
                *d -= Complex::new(dt * g, 0.0) * u;
            }
            state.time += dt;
            if step % checkpoint_every == 0 || step == steps {
                self.check_symmetry(&state.dhat)?;
                let res = self.residuals(state);
                let urho = self.empirical_spectrum(&res)?;
                record(
                    state, &res, &urho, &mut times, &mut losses, &mut residual_rows,
                    &mut uhat_rows, &mut urho_rows,
                );
            }
        }
        FlowTrajectory::new(
            times,
            losses,
            residual_rows,
            Some(SpectralSnapshots {
                nodes: self.lattice.nodes().to_vec(),
                uhat: uhat_rows,
                urho: urho_rows,
            }),
        )
    }

    fn empirical_spectrum(&self, residuals: &[Real]) -> Result<Vec<CReal>> {
        self.lattice
            .nodes()
            .iter()
            .map(|node| empirical_transform(residuals, self.dataset.points(), node))
            .collect()
    }

    fn check_symmetry(&self, dhat: &[CReal]) -> Result<()> {
        let scale = dhat.iter().map(|u| u.norm()).fold(0.0, Real::max).max(1.0);
        for (i, &j) in self.conj_pairs.iter().enumerate() {
            let drift = (dhat[i] - dhat[j].conj()).norm();
            if drift > SYMMETRY_TOL * scale {
                return Err(FplError::Numerical(format!(
                    "conjugate symmetry violated by {drift} at node {i}"
                )));
            }
        }
        Ok(())
    }
}

/// For each node index, the index of the node at the negated frequency.
fn conjugate_pairs(lattice: &FrequencyLattice<Real>) -> Result<Vec<usize>> {
    let quantum = lattice.d_xi() / 4.0;
    let key = |node: &[Real]| -> Vec<i64> {
        node.iter().map(|x| (x / quantum).round() as i64).collect()
    };
    let mut index = std::collections::HashMap::new();
    for (i, node) in lattice.nodes().iter().enumerate() {
        index.insert(key(node), i);
    }
    lattice
        .nodes()
        .iter()
        .map(|node| {
            let neg: Vec<Real> = node.iter().map(|x| -x).collect();
            index.get(&key(&neg)).copied().ok_or_else(|| {
                FplError::InvalidSpec("lattice is not symmetric about the origin".into())
            })
        })
        .collect()
}

fn power_iteration_radius(g: &nalgebra::DMatrix<Real>) -> Real {
    let n = g.nrows();
    let mut v = nalgebra::DVector::from_element(n, 1.0 / (n as Real).sqrt());
    // deterministic tie-breaking perturbation
    for i in 0..n {
        v[i] += 1e-3 * ((i + 1) as Real).sin();
    }
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w = g * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = v.dot(&w);
        v = w / norm;
    }
    lambda.abs()
}

/// Per-node dissipation curves `Re(uhat * conj(urho)) / 2` over time.
///
/// Their decay is governed by `-gamma |urho|^2`, so with a decaying rate the
/// low-frequency node energies settle first.
pub fn frequency_dissipation(trajectory: &FlowTrajectory) -> Result<Vec<Vec<Real>>> {
    let snaps = trajectory
        .spectral()
        .ok_or_else(|| FplError::InvalidSpec("trajectory has no spectral snapshots".into()))?;
    Ok(snaps
        .uhat
        .iter()
        .zip(&snaps.urho)
        .map(|(u_row, ur_row)| {
            u_row
                .iter()
                .zip(ur_row)
                .map(|(u, ur)| 0.5 * (u * ur.conj()).re)
                .collect()
        })
        .collect())
}
