//! Fully connected ReLU MLP with full-batch gradient descent, used for the
//! high-dimensional parity experiment. Batched with ndarray so the big
//! hidden-layer products go through the tuned matmul kernels.

use ndarray::{Array1, Array2, Axis};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::rng::RandomSource;
use crate::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    pub widths: Vec<usize>,
    /// `weights[l]` has shape (widths[l+1], widths[l]).
    pub weights: Vec<Array2<Real>>,
    pub biases: Vec<Array1<Real>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpTrainConfig {
    pub eta: Real,
    pub max_steps: usize,
    pub loss_tolerance: Real,
    /// Evaluate stop conditions every this many steps (also the loss
    /// recording stride).
    pub check_every: usize,
    /// Stop once sign(f) matches sign(y) on every training point.
    pub stop_at_full_sign_accuracy: bool,
}

#[derive(Debug, Clone)]
pub struct MlpTrainRecord {
    /// (step, loss) at each check.
    pub losses: Vec<(usize, Real)>,
    pub steps_run: usize,
    pub final_loss: Real,
    pub converged: bool,
    pub final_sign_accuracy: Real,
}

/// He-initialized MLP: W ~ N(0, 2/fan_in), biases zero. Hidden activations
/// are ReLU; the scalar output layer is linear.
pub fn build_mlp(widths: &[usize], source: &RandomSource) -> Result<Mlp> {
    if widths.len() < 2 {
        return Err(FplError::InvalidSpec("need at least input and output widths".into()));
    }
    if widths.iter().any(|&w| w == 0) {
        return Err(FplError::InvalidSpec("zero layer width".into()));
    }
    let mut rng = source.rng();
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for l in 0..widths.len() - 1 {
        let (fan_in, fan_out) = (widths[l], widths[l + 1]);
        let dist = Normal::new(0.0, (2.0 / fan_in as Real).sqrt()).expect("positive sd");
        weights.push(Array2::from_shape_fn((fan_out, fan_in), |_| dist.sample(&mut rng)));
        biases.push(Array1::zeros(fan_out));
    }
    Ok(Mlp { widths: widths.to_vec(), weights, biases })
}

impl Mlp {
    pub fn out_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    fn batch(points: &[Vec<Real>], dim: usize) -> Result<Array2<Real>> {
        let mut x = Array2::zeros((points.len(), dim));
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(FplError::Shape("input dimension mismatch".into()));
            }
            for (j, &v) in p.iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        Ok(x)
    }

    /// Activations after each layer; `acts[0]` is the input batch.
    fn forward_all(&self, x: Array2<Real>) -> Vec<Array2<Real>> {
        let mut acts = vec![x];
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = acts.last().unwrap().dot(&w.t());
            z += &b.view().insert_axis(Axis(0));
            if l < last {
                z.mapv_inplace(|v| v.max(0.0));
            }
            acts.push(z);
        }
        acts
    }

    pub fn forward_batch(&self, points: &[Vec<Real>]) -> Result<Vec<Real>> {
        if self.out_dim() != 1 {
            return Err(FplError::Shape("scalar output expected".into()));
        }
        let x = Self::batch(points, self.widths[0])?;
        Ok(self.forward_all(x).pop().unwrap().column(0).to_vec())
    }

    pub fn loss(&self, dataset: &Dataset<Real>) -> Result<Real> {
        let preds = self.forward_batch(dataset.points())?;
        let n = dataset.len() as Real;
        Ok(preds
            .iter()
            .zip(dataset.values())
            .map(|(p, y)| (p - y) * (p - y))
            .sum::<Real>()
            / (2.0 * n))
    }

    /// Full-batch backprop; returns (pre-step loss, weight grads, bias grads).
    fn gradients(
        &self,
        x: Array2<Real>,
        y: &[Real],
    ) -> (Real, Vec<Array2<Real>>, Vec<Array1<Real>>) {
        let n = x.nrows() as Real;
        let acts = self.forward_all(x);
        let out = acts.last().unwrap();
        let mut delta = out.clone();
        for (i, &yi) in y.iter().enumerate() {
            delta[(i, 0)] -= yi;
        }
        let loss = delta.iter().map(|e| e * e).sum::<Real>() / (2.0 * n);
        delta.mapv_inplace(|e| e / n);
        let layers = self.weights.len();
        let mut gw = vec![Array2::zeros((0, 0)); layers];
        let mut gb = vec![Array1::zeros(0); layers];
        for l in (0..layers).rev() {
            gw[l] = delta.t().dot(&acts[l]);
            gb[l] = delta.sum_axis(Axis(0));
            if l > 0 {
                let mut prev = delta.dot(&self.weights[l]);
                prev.zip_mut_with(&acts[l], |d, &a| {
                    if a <= 0.0 {
                        *d = 0.0;
                    }
                });
                delta = prev;
            }
        }
        (loss, gw, gb)
    }

    /// One explicit-Euler descent step; returns the pre-step loss.
    pub fn grad_step(&mut self, dataset: &Dataset<Real>, eta: Real) -> Result<Real> {
        if !(eta > 0.0) {
            return Err(FplError::InvalidSpec("learning rate must be positive".into()));
        }
        let x = Self::batch(dataset.points(), self.widths[0])?;
        let (loss, gw, gb) = self.gradients(x, dataset.values());
        for ((w, b), (dw, db)) in
            self.weights.iter_mut().zip(&mut self.biases).zip(gw.iter().zip(&gb))
        {
            w.scaled_add(-eta, dw);
            b.scaled_add(-eta, db);
        }
        Ok(loss)
    }

    pub fn n_params(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Flattened parameters, layer by layer, weights (row-major) then bias.
    pub fn params(&self) -> Vec<Real> {
        let mut p = Vec::with_capacity(self.n_params());
        for (w, b) in self.weights.iter().zip(&self.biases) {
            p.extend(w.iter());
            p.extend(b.iter());
        }
        p
    }

    pub fn set_params(&mut self, p: &[Real]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(FplError::Shape("parameter vector length mismatch".into()));
        }
        let mut off = 0;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            for v in w.iter_mut() {
                *v = p[off];
                off += 1;
            }
            for v in b.iter_mut() {
                *v = p[off];
                off += 1;
            }
        }
        Ok(())
    }

    /// Loss gradient flattened like `params`, for verification against
    /// finite differences.
    pub fn loss_gradient(&self, dataset: &Dataset<Real>) -> Result<Vec<Real>> {
        let x = Self::batch(dataset.points(), self.widths[0])?;
        let (_, gw, gb) = self.gradients(x, dataset.values());
        let mut g = Vec::with_capacity(self.n_params());
        for (w, b) in gw.iter().zip(&gb) {
            g.extend(w.iter());
            g.extend(b.iter());
        }
        Ok(g)
    }

    pub fn sign_accuracy(&self, dataset: &Dataset<Real>) -> Result<Real> {
        let preds = self.forward_batch(dataset.points())?;
        let hits = preds
            .iter()
            .zip(dataset.values())
            .filter(|(p, y)| (**p >= 0.0) == (**y >= 0.0))
            .count();
        Ok(hits as Real / dataset.len() as Real)
    }
}

/// Full-batch descent with the same divergence policy as the two-layer
/// trainer (abort past 1e6x the initial loss with a step-size hint).
pub fn train_mlp(
    net: &mut Mlp,
    dataset: &Dataset<Real>,
    cfg: &MlpTrainConfig,
) -> Result<MlpTrainRecord> {
    if cfg.check_every == 0 {
        return Err(FplError::InvalidSpec("check_every must be >= 1".into()));
    }
    let initial = net.loss(dataset)?;
    let mut losses = vec![(0, initial)];
    let mut converged = initial <= cfg.loss_tolerance;
    let mut steps_run = 0;
    while steps_run < cfg.max_steps && !converged {
        let loss = net.grad_step(dataset, cfg.eta)?;
        if !loss.is_finite() || loss > 1e6 * initial.max(Real::MIN_POSITIVE) {
            return Err(FplError::Numerical(format!(
                "training diverged at step {steps_run} (loss {loss:.3e}); reduce the learning rate"
            )));
        }
        steps_run += 1;
        if steps_run % cfg.check_every == 0 || steps_run == cfg.max_steps {
            let cur = net.loss(dataset)?;
            losses.push((steps_run, cur));
            if cur <= cfg.loss_tolerance {
                converged = true;
            }
            if cfg.stop_at_full_sign_accuracy && net.sign_accuracy(dataset)? == 1.0 {
                converged = true;
            }
        }
    }
    Ok(MlpTrainRecord {
        losses,
        steps_run,
        final_loss: net.loss(dataset)?,
        converged,
        final_sign_accuracy: net.sign_accuracy(dataset)?,
    })
}
