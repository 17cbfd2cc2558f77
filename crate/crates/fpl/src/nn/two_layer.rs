//! Two-layer ReLU network f(x) = (1/sqrt(m)) sum_j a_j relu(w_j.x + r_j c_j)
//! with r_j = ||w_j||. The bias coupling r_j(w) is differentiated through
//! (d r/d w = w/||w||, subgradient 0 at w = 0), so the only trainable
//! parameters are (a_j, w_j, c_j).

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::rng::RandomSource;
use crate::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoLayerNet {
    pub dim: usize,
    pub m: usize,
    pub a: Vec<Real>,
    /// Row-major, `m` rows of `dim` entries.
    pub w: Vec<Real>,
    pub c: Vec<Real>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InitConfig {
    pub sigma_a: Real,
    pub sigma_w: Real,
    pub sigma_c: Real,
    pub asi: bool,
    /// Variance-reduced sampling: biases are drawn by stratified inversion of
    /// the normal CDF and each fresh neuron gets a mirror twin with `w`
    /// negated, which symmetrizes the kink placement of the random features.
    /// Marginal distributions are unchanged. Requires `asi` and `m % 4 == 0`.
    #[serde(default)]
    pub stratified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub eta: Real,
    pub max_steps: usize,
    pub loss_tolerance: Real,
    /// Steps at which to checkpoint; step 0 and the final step are always
    /// recorded.
    pub checkpoints: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TrainCheckpoint {
    pub step: usize,
    pub loss: Real,
    /// Predictions on the evaluation grid passed to `train`.
    pub eval: Vec<Real>,
    pub params: Vec<Real>,
}

#[derive(Debug, Clone)]
pub struct TrainRecord {
    pub checkpoints: Vec<TrainCheckpoint>,
    /// Loss before each step taken (index = step).
    pub losses: Vec<Real>,
    pub final_loss: Real,
    pub steps_run: usize,
    pub converged: bool,
}

/// a ~ N(0, sigma_a^2), w componentwise N(0, sigma_w^2) (so w/||w|| is
/// uniform on the sphere), c ~ N(0, sigma_c^2). With `asi` the second half of
/// the neurons copies the first with `a` negated, making the initial output
/// identically zero; `m` must then be even.
pub fn init_two_layer(
    m: usize,
    dim: usize,
    cfg: &InitConfig,
    source: &RandomSource,
) -> Result<TwoLayerNet> {
    if m < 2 {
        return Err(FplError::InvalidSpec("need m >= 2 neurons".into()));
    }
    if cfg.asi && m % 2 != 0 {
        return Err(FplError::InvalidSpec("antisymmetric init requires even m".into()));
    }
    for (name, s) in [("sigma_a", cfg.sigma_a), ("sigma_w", cfg.sigma_w), ("sigma_c", cfg.sigma_c)]
    {
        if !(s > 0.0 && s.is_finite()) {
            return Err(FplError::InvalidSpec(format!("{name} must be positive, got {s}")));
        }
    }
    if cfg.stratified && (!cfg.asi || m % 4 != 0) {
        return Err(FplError::InvalidSpec(
            "stratified init requires asi and m divisible by 4".into(),
        ));
    }
    let mut rng = source.rng();
    let na = Normal::new(0.0, cfg.sigma_a).expect("valid sigma");
    let nw = Normal::new(0.0, cfg.sigma_w).expect("valid sigma");
    let nc = Normal::new(0.0, cfg.sigma_c).expect("valid sigma");
    let fresh = if cfg.asi { m / 2 } else { m };
    let mut a = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m * dim);
    let mut c = Vec::with_capacity(m);
    if cfg.stratified {
        let q = m / 4;
        for j in 0..q {
            a.push(na.sample(&mut rng));
            for _ in 0..dim {
                w.push(nw.sample(&mut rng));
            }
            let u: Real = (j as Real + rng.gen_range(0.0..1.0)) / q as Real;
            c.push(cfg.sigma_c * normal_quantile(u));
        }
        for j in 0..q {
            a.push(a[j]);
            for k in 0..dim {
                w.push(-w[j * dim + k]);
            }
            c.push(c[j]);
        }
    } else {
        for _ in 0..fresh {
            a.push(na.sample(&mut rng));
            for _ in 0..dim {
                w.push(nw.sample(&mut rng));
            }
            c.push(nc.sample(&mut rng));
        }
    }
    if cfg.asi {
        for j in 0..fresh {
            a.push(-a[j]);
            for k in 0..dim {
                w.push(w[j * dim + k]);
            }
            c.push(c[j]);
        }
    }
    Ok(TwoLayerNet { dim, m, a, w, c })
}

/// Acklam's rational approximation to the standard normal quantile
/// (absolute error below 1.2e-9 on (0, 1)).
fn normal_quantile(p: Real) -> Real {
    const A: [Real; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [Real; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [Real; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [Real; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: Real = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

impl TwoLayerNet {
    #[inline]
    fn w_row(&self, j: usize) -> &[Real] {
        &self.w[j * self.dim..(j + 1) * self.dim]
    }

    /// Pre-activation of neuron j at x, and ||w_j||.
    #[inline]
    fn preact(&self, j: usize, x: &[Real]) -> (Real, Real) {
        let wj = self.w_row(j);
        let mut z = 0.0;
        let mut r2 = 0.0;
        for (wk, xk) in wj.iter().zip(x) {
            z += wk * xk;
            r2 += wk * wk;
        }
        let r = r2.sqrt();
        (z + r * self.c[j], r)
    }

    pub fn forward(&self, x: &[Real]) -> Real {
        assert_eq!(x.len(), self.dim, "input dimension mismatch");
        let scale = 1.0 / (self.m as Real).sqrt();
        let mut out = 0.0;
        for j in 0..self.m {
            let (z, _) = self.preact(j, x);
            if z > 0.0 {
                out += self.a[j] * z;
            }
        }
        out * scale
    }

    pub fn forward_batch(&self, points: &[Vec<Real>]) -> Vec<Real> {
        points.iter().map(|p| self.forward(p)).collect()
    }

    /// R_S = (1/2n) sum_i (f(x_i) - y_i)^2.
    pub fn loss(&self, dataset: &Dataset<Real>) -> Real {
        let n = dataset.len() as Real;
        dataset
            .points()
            .iter()
            .zip(dataset.values())
            .map(|(x, &y)| {
                let e = self.forward(x) - y;
                e * e
            })
            .sum::<Real>()
            / (2.0 * n)
    }

    pub fn n_params(&self) -> usize {
        self.m * (self.dim + 2)
    }

    /// Flattened parameters in the order [a | w (row-major) | c].
    pub fn params(&self) -> Vec<Real> {
        let mut p = Vec::with_capacity(self.n_params());
        p.extend_from_slice(&self.a);
        p.extend_from_slice(&self.w);
        p.extend_from_slice(&self.c);
        p
    }

    pub fn set_params(&mut self, p: &[Real]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(FplError::Shape(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                p.len()
            )));
        }
        self.a.copy_from_slice(&p[..self.m]);
        self.w.copy_from_slice(&p[self.m..self.m + self.m * self.dim]);
        self.c.copy_from_slice(&p[self.m + self.m * self.dim..]);
        Ok(())
    }

    /// Gradient of the output at a single point, flattened like `params`.
    pub fn output_gradient(&self, x: &[Real]) -> Vec<Real> {
        assert_eq!(x.len(), self.dim, "input dimension mismatch");
        let scale = 1.0 / (self.m as Real).sqrt();
        let mut g = vec![0.0; self.n_params()];
        let (ga, rest) = g.split_at_mut(self.m);
        let (gw, gc) = rest.split_at_mut(self.m * self.dim);
        for j in 0..self.m {
            let (z, r) = self.preact(j, x);
            if z <= 0.0 {
                continue;
            }
            ga[j] = scale * z;
            let coef = scale * self.a[j];
            let wj = self.w_row(j);
            let bias_scale = if r > 0.0 { self.c[j] / r } else { 0.0 };
            for k in 0..self.dim {
                gw[j * self.dim + k] = coef * (x[k] + bias_scale * wj[k]);
            }
            gc[j] = coef * r;
        }
        g
    }

    /// Loss and its full-batch gradient (flattened like `params`) in a
    /// single fused sweep: pre-activations computed once per point and
    /// reused for both the residual and the gradient accumulation.
    pub fn loss_and_gradient(&self, dataset: &Dataset<Real>) -> (Real, Vec<Real>) {
        let n = dataset.len() as Real;
        let scale = 1.0 / (self.m as Real).sqrt();
        let mut g = vec![0.0; self.n_params()];
        let mut zs = vec![(0.0, 0.0); self.m];
        let mut loss = 0.0;
        for (x, &y) in dataset.points().iter().zip(dataset.values()) {
            let mut f = 0.0;
            for (j, slot) in zs.iter_mut().enumerate() {
                *slot = self.preact(j, x);
                if slot.0 > 0.0 {
                    f += self.a[j] * slot.0;
                }
            }
            f *= scale;
            let err = f - y;
            loss += err * err / (2.0 * n);
            let res = err / n;
            if res == 0.0 {
                continue;
            }
            let (ga, rest) = g.split_at_mut(self.m);
            let (gw, gc) = rest.split_at_mut(self.m * self.dim);
            for (j, &(z, r)) in zs.iter().enumerate() {
                if z <= 0.0 {
                    continue;
                }
                ga[j] += res * scale * z;
                let coef = res * scale * self.a[j];
                let wj = self.w_row(j);
                let bias_scale = if r > 0.0 { self.c[j] / r } else { 0.0 };
                for k in 0..self.dim {
                    gw[j * self.dim + k] += coef * (x[k] + bias_scale * wj[k]);
                }
                gc[j] += coef * r;
            }
        }
        (loss, g)
    }

    /// Full-batch gradient of the MSE loss, flattened like `params`.
    pub fn loss_gradient(&self, dataset: &Dataset<Real>) -> Vec<Real> {
        self.loss_and_gradient(dataset).1
    }

    /// One explicit-Euler descent step; returns the pre-step loss.
    pub fn grad_step(&mut self, dataset: &Dataset<Real>, eta: Real) -> Result<Real> {
        if !(eta > 0.0) {
            return Err(FplError::InvalidSpec(format!("learning rate must be positive, got {eta}")));
        }
        let (loss, g) = self.loss_and_gradient(dataset);
        let (ga, rest) = g.split_at(self.m);
        let (gw, gc) = rest.split_at(self.m * self.dim);
        for (p, d) in self.a.iter_mut().zip(ga) {
            *p -= eta * d;
        }
        for (p, d) in self.w.iter_mut().zip(gw) {
            *p -= eta * d;
        }
        for (p, d) in self.c.iter_mut().zip(gc) {
            *p -= eta * d;
        }
        Ok(loss)
    }

    /// A = mean_j(a_j^2 + r_j^2), B = mean_j(a_j^2 r_j^2), measured on the
    /// current parameters (intended at initialization).
    pub fn init_stats(&self) -> (Real, Real) {
        let mut a_stat = 0.0;
        let mut b_stat = 0.0;
        for j in 0..self.m {
            let r2: Real = self.w_row(j).iter().map(|w| w * w).sum();
            let a2 = self.a[j] * self.a[j];
            a_stat += a2 + r2;
            b_stat += a2 * r2;
        }
        (a_stat / self.m as Real, b_stat / self.m as Real)
    }

    /// Gram matrix of output gradients, K_{ij} = grad f(x_i) . grad f(x_j).
    pub fn empirical_ntk(&self, points: &[Vec<Real>]) -> nalgebra::DMatrix<Real> {
        let grads: Vec<Vec<Real>> = points.iter().map(|p| self.output_gradient(p)).collect();
        let n = points.len();
        let mut k = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: Real = grads[i].iter().zip(&grads[j]).map(|(a, b)| a * b).sum();
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        k
    }

    /// First-order model around this net: f(x) + grad f(x) . (theta - theta_0).
    pub fn linearized_forward(&self, theta: &[Real], x: &[Real]) -> Result<Real> {
        if theta.len() != self.n_params() {
            return Err(FplError::Shape("parameter vector length mismatch".into()));
        }
        let base = self.params();
        let g = self.output_gradient(x);
        let corr: Real = g
            .iter()
            .zip(theta.iter().zip(&base))
            .map(|(gi, (t, b))| gi * (t - b))
            .sum();
        Ok(self.forward(x) + corr)
    }
}

/// Full-batch descent until the loss tolerance or the step budget. Aborts
/// with a diagnostic if the loss exceeds 1e6 times its initial value or
/// turns non-finite (try a smaller learning rate).
pub fn train(
    net: &mut TwoLayerNet,
    dataset: &Dataset<Real>,
    eval_grid: &[Vec<Real>],
    cfg: &TrainConfig,
) -> Result<TrainRecord> {
    if !(cfg.eta > 0.0) {
        return Err(FplError::InvalidSpec("learning rate must be positive".into()));
    }
    let mut marks: Vec<usize> = cfg.checkpoints.clone();
    marks.sort_unstable();
    marks.dedup();
    let mut checkpoints = Vec::new();
    let mut losses = Vec::new();
    let initial = net.loss(dataset);
    let snapshot = |net: &TwoLayerNet, step: usize, loss: Real| TrainCheckpoint {
        step,
        loss,
        eval: net.forward_batch(eval_grid),
        params: net.params(),
    };
    checkpoints.push(snapshot(net, 0, initial));
    let mut converged = false;
    let mut steps_run = 0;
    let mut final_loss;
    loop {
        // one fused sweep per step: the loss here is pre-update
        let (loss, g) = net.loss_and_gradient(dataset);
        final_loss = loss;
        if !loss.is_finite() || loss > 1e6 * initial.max(Real::MIN_POSITIVE) {
            return Err(FplError::Numerical(format!(
                "training diverged at step {steps_run} (loss {loss:.3e}); reduce the learning rate"
            )));
        }
        if loss <= cfg.loss_tolerance {
            converged = true;
            break;
        }
        if steps_run == cfg.max_steps {
            break;
        }
        losses.push(loss);
        let (ga, rest) = g.split_at(net.m);
        let (gw, gc) = rest.split_at(net.m * net.dim);
        for (p, d) in net.a.iter_mut().zip(ga) {
            *p -= cfg.eta * d;
        }
        for (p, d) in net.w.iter_mut().zip(gw) {
            *p -= cfg.eta * d;
        }
        for (p, d) in net.c.iter_mut().zip(gc) {
            *p -= cfg.eta * d;
        }
        steps_run += 1;
        if marks.binary_search(&steps_run).is_ok() {
            checkpoints.push(snapshot(net, steps_run, net.loss(dataset)));
        }
    }
    if checkpoints.last().map(|c| c.step) != Some(steps_run) {
        checkpoints.push(snapshot(net, steps_run, final_loss));
    }
    Ok(TrainRecord {
        checkpoints,
        losses,
        final_loss,
        steps_run,
        converged,
    })
}

/// Bisection probe for a stable step size: halve `eta_start` until 100
/// consecutive steps on a scratch copy are monotone non-increasing.
pub fn stable_learning_rate(
    net: &TwoLayerNet,
    dataset: &Dataset<Real>,
    eta_start: Real,
) -> Result<Real> {
    if !(eta_start > 0.0) {
        return Err(FplError::InvalidSpec("probe start must be positive".into()));
    }
    let mut eta = eta_start;
    'outer: for _ in 0..60 {
        let mut probe = net.clone();
        let mut prev = Real::INFINITY;
        for _ in 0..101 {
            // grad_step reports the pre-update loss, so 101 steps observe
            // 100 consecutive decrements
            let cur = probe.grad_step(dataset, eta)?;
            if !cur.is_finite() || cur > prev * (1.0 + 1e-12) {
                eta *= 0.5;
                continue 'outer;
            }
            prev = cur;
        }
        return Ok(eta);
    }
    Err(FplError::Numerical("no stable learning rate found within 60 halvings".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn cfg() -> InitConfig {
        InitConfig { sigma_a: 0.5, sigma_w: 1.0, sigma_c: 2.0, asi: true, stratified: false }
    }

    fn small_dataset() -> Dataset<Real> {
        let pts: Vec<Vec<Real>> = (0..6).map(|i| vec![-1.0 + 0.4 * i as Real]).collect();
        Dataset::from_fn(pts, |x| (x[0]).sin() + 0.3 * (5.0 * x[0]).sin()).unwrap()
    }

    #[test]
    fn asi_output_is_zero() {
        let net = init_two_layer(64, 3, &cfg(), &RandomSource::new(5)).unwrap();
        let mut rng = RandomSource::new(6).rng();
        for _ in 0..50 {
            let x: Vec<Real> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            assert!(net.forward(&x).abs() <= 1e-12);
        }
    }

    #[test]
    fn init_is_deterministic() {
        let a = init_two_layer(32, 2, &cfg(), &RandomSource::new(9)).unwrap();
        let b = init_two_layer(32, 2, &cfg(), &RandomSource::new(9)).unwrap();
        assert_eq!(a.params(), b.params());
    }

    #[test]
    fn weight_norm_moment_matches_chi_square() {
        // E||w||^2 = d sigma_w^2 = 2; Var(||w||^2) = 2d sigma_w^4 = 4
        let net = init_two_layer(
            100_000,
            2,
            &InitConfig { sigma_a: 1.0, sigma_w: 1.0, sigma_c: 1.0, asi: false, stratified: false },
            &RandomSource::new(13),
        )
        .unwrap();
        let mean: Real =
            (0..net.m).map(|j| net.w_row(j).iter().map(|w| w * w).sum::<Real>()).sum::<Real>()
                / net.m as Real;
        let se = (4.0 / net.m as Real).sqrt();
        assert!((mean - 2.0).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn forward_single_relu() {
        let net = TwoLayerNet { dim: 1, m: 1, a: vec![1.0], w: vec![1.0], c: vec![0.0] };
        assert_relative_eq!(net.forward(&[2.0]), 2.0);
        assert_relative_eq!(net.forward(&[-2.0]), 0.0);
    }

    #[test]
    fn forward_matches_slow_oracle() {
        let net = init_two_layer(40, 3, &cfg(), &RandomSource::new(21)).unwrap();
        let mut rng = RandomSource::new(22).rng();
        for _ in 0..20 {
            let x: Vec<Real> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let mut slow = 0.0;
            for j in 0..net.m {
                let wj = &net.w[j * 3..(j + 1) * 3];
                let r = wj.iter().map(|v| v * v).sum::<Real>().sqrt();
                let z = wj.iter().zip(&x).map(|(a, b)| a * b).sum::<Real>() + r * net.c[j];
                slow += net.a[j] * z.max(0.0);
            }
            slow /= (net.m as Real).sqrt();
            assert_relative_eq!(net.forward(&x), slow, epsilon = 1e-12);
        }
    }

    #[test]
    fn loss_gradient_matches_finite_differences() {
        let net = init_two_layer(24, 2, &cfg(), &RandomSource::new(30)).unwrap();
        let pts: Vec<Vec<Real>> =
            (0..5).map(|i| vec![0.3 * i as Real - 0.6, 0.2 * i as Real]).collect();
        let ds = Dataset::from_fn(pts, |x| x[0] * x[1] + 0.5).unwrap();
        let g = net.loss_gradient(&ds);
        let p0 = net.params();
        let scale = p0.iter().map(|v| v.abs()).fold(0.0, Real::max).max(1.0);
        let eps = 1e-6 * scale;
        let mut rng = RandomSource::new(31).rng();
        for _ in 0..30 {
            let v: Vec<Real> = (0..p0.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let analytic: Real = g.iter().zip(&v).map(|(a, b)| a * b).sum();
            let mut plus = net.clone();
            let mut minus = net.clone();
            plus.set_params(
                &p0.iter().zip(&v).map(|(p, d)| p + eps * d).collect::<Vec<_>>(),
            )
            .unwrap();
            minus
                .set_params(&p0.iter().zip(&v).map(|(p, d)| p - eps * d).collect::<Vec<_>>())
                .unwrap();
            let numeric = (plus.loss(&ds) - minus.loss(&ds)) / (2.0 * eps);
            assert_relative_eq!(analytic, numeric, max_relative = 1e-5, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_residual_step_is_identity() {
        let mut net = init_two_layer(8, 1, &cfg(), &RandomSource::new(40)).unwrap();
        // targets = current outputs -> zero residuals
        let pts: Vec<Vec<Real>> = vec![vec![0.1], vec![0.5], vec![-0.4]];
        let vals = net.forward_batch(&pts);
        let ds = Dataset::new(pts, vals).unwrap();
        let before = net.params();
        net.grad_step(&ds, 0.1).unwrap();
        assert_eq!(net.params(), before);
    }

    #[test]
    fn small_step_descends_100_times() {
        let mut net = init_two_layer(64, 1, &cfg(), &RandomSource::new(44)).unwrap();
        let ds = small_dataset();
        let eta = stable_learning_rate(&net, &ds, 1.0).unwrap();
        let mut prev = net.loss(&ds);
        for _ in 0..100 {
            net.grad_step(&ds, eta).unwrap();
            let cur = net.loss(&ds);
            assert!(cur <= prev * (1.0 + 1e-12), "loss rose: {prev} -> {cur}");
            prev = cur;
        }
    }

    #[test]
    fn init_stats_trivial_and_moment_oracle() {
        let net = TwoLayerNet {
            dim: 1,
            m: 3,
            a: vec![1.0, 1.0, 1.0],
            w: vec![1.0, 1.0, 1.0],
            c: vec![0.0; 3],
        };
        let (a_stat, b_stat) = net.init_stats();
        assert_relative_eq!(a_stat, 2.0);
        assert_relative_eq!(b_stat, 1.0);

        // large-m Gaussian moments: A ~ sigma_a^2 + d sigma_w^2, B ~ sigma_a^2 d sigma_w^2
        let net = init_two_layer(
            100_000,
            2,
            &InitConfig { sigma_a: 0.5, sigma_w: 1.5, sigma_c: 1.0, asi: false, stratified: false },
            &RandomSource::new(50),
        )
        .unwrap();
        let (a_stat, b_stat) = net.init_stats();
        let (ea, eb) = (0.25 + 2.0 * 2.25, 0.25 * 2.0 * 2.25);
        // var(a^2) = 2 sigma_a^4; var(r^2) = 2 d sigma_w^4; independence
        let var_a = 2.0 * 0.25f64.powi(2) + 2.0 * 2.0 * 2.25f64.powi(2);
        let var_b = (3.0 * 0.25f64.powi(2)) * (8.0 * 2.25f64.powi(2)) - eb * eb;
        assert!((a_stat - ea).abs() <= 3.0 * (var_a / 1e5).sqrt());
        assert!((b_stat - eb).abs() <= 3.0 * (var_b / 1e5).sqrt());
    }

    #[test]
    fn ntk_symmetric_psd_single_point() {
        let net = init_two_layer(32, 2, &cfg(), &RandomSource::new(60)).unwrap();
        let pts = vec![vec![0.2, -0.3], vec![0.7, 0.1], vec![-0.5, 0.4]];
        let k = net.empirical_ntk(&pts);
        assert_eq!(k, k.transpose());
        assert!(k[(0, 0)] >= 0.0);
        let eig = k.symmetric_eigenvalues();
        assert!(eig.iter().all(|&l| l >= -1e-10));
    }

    #[test]
    fn linearized_forward_identities() {
        let net = init_two_layer(16, 1, &cfg(), &RandomSource::new(70)).unwrap();
        let x = [0.3];
        let theta0 = net.params();
        assert_relative_eq!(net.linearized_forward(&theta0, &x).unwrap(), net.forward(&x));
        let mut theta1 = theta0.clone();
        let mut theta2 = theta0.clone();
        for i in 0..theta0.len() {
            theta1[i] += 0.01 * (i as Real).sin();
            theta2[i] += 0.02 * (i as Real).sin();
        }
        let f0 = net.forward(&x);
        let d1 = net.linearized_forward(&theta1, &x).unwrap() - f0;
        let d2 = net.linearized_forward(&theta2, &x).unwrap() - f0;
        assert_relative_eq!(d2, 2.0 * d1, max_relative = 1e-12);
    }

    #[test]
    fn train_stops_when_interpolating() {
        let mut net = init_two_layer(16, 1, &cfg(), &RandomSource::new(80)).unwrap();
        let pts = vec![vec![0.1], vec![0.6]];
        let vals = net.forward_batch(&pts);
        let ds = Dataset::new(pts, vals).unwrap();
        let rec = train(
            &mut net,
            &ds,
            &[],
            &TrainConfig { eta: 0.1, max_steps: 100, loss_tolerance: 1e-12, checkpoints: vec![] },
        )
        .unwrap();
        assert!(rec.converged);
        assert_eq!(rec.steps_run, 0);
    }

    #[test]
    fn divergence_aborts_with_diagnostic() {
        let mut net = init_two_layer(64, 1, &cfg(), &RandomSource::new(90)).unwrap();
        let ds = small_dataset();
        let err = train(
            &mut net,
            &ds,
            &[],
            &TrainConfig { eta: 1e6, max_steps: 500, loss_tolerance: 0.0, checkpoints: vec![] },
        );
        match err {
            Err(FplError::Numerical(msg)) => assert!(msg.contains("learning rate")),
            other => panic!("expected divergence error, got {other:?}"),
        }
    }

    #[test]
    fn training_is_deterministic() {
        let ds = small_dataset();
        let run = || {
            let mut net = init_two_layer(32, 1, &cfg(), &RandomSource::new(99)).unwrap();
            train(
                &mut net,
                &ds,
                &[vec![0.25]],
                &TrainConfig {
                    eta: 0.05,
                    max_steps: 200,
                    loss_tolerance: 0.0,
                    checkpoints: vec![100],
                },
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.losses, b.losses);
        assert_eq!(a.checkpoints[1].params, b.checkpoints[1].params);
        assert_eq!(a.checkpoints[1].eval, b.checkpoints[1].eval);
    }
}
