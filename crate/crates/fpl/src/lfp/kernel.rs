//! Spatial kernel of the rate function and the training-point Gram matrix.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use nalgebra::DMatrix;

use crate::dataset::Dataset;
use crate::error::Result;
use crate::gamma::GammaSpec;
use crate::lattice::FrequencyLattice;
use crate::scalar::dot;
use crate::Real;

/// `Gamma(x) = (2 pi)^-d * integral gamma(xi) exp(i xi . x) dxi`, discretized
/// as a trapezoidal sum over the lattice. The lattice excludes the origin, so
/// the value at `x = 0` is finite and depends on `(eps_zero, xi_max, d_xi)`;
/// those knobs are surfaced in every result file rather than fixed here.
pub struct SpatialKernel {
    nodes: Vec<Vec<Real>>,
    gammas: Vec<Real>,
    prefactor: Real,
    dim: usize,
    cache: Mutex<HashMap<Vec<i64>, Real>>,
}

/// Displacements are cached after quantization at this step.
const CACHE_QUANTUM: Real = 1e-12;

impl SpatialKernel {
    pub fn new(spec: &GammaSpec<Real>, lattice: &FrequencyLattice<Real>) -> Result<Self> {
        let mut gammas = Vec::with_capacity(lattice.len());
        for node in lattice.nodes() {
            gammas.push(spec.eval(node)?);
        }
        let prefactor = lattice.cell_volume() / (2.0 * PI).powi(lattice.dim() as i32);
        Ok(Self {
            nodes: lattice.nodes().to_vec(),
            gammas,
            prefactor,
            dim: lattice.dim(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Kernel value at a displacement; real by conjugate symmetry of the
    /// lattice, so only the cosine sum is accumulated.
    pub fn eval(&self, displacement: &[Real]) -> Real {
        assert_eq!(displacement.len(), self.dim, "displacement dimension mismatch");
        let key: Vec<i64> =
            displacement.iter().map(|x| (x / CACHE_QUANTUM).round() as i64).collect();
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return *v;
        }
        let mut sum = 0.0;
        for (node, g) in self.nodes.iter().zip(&self.gammas) {
            sum += g * dot(node, displacement).cos();
        }
        let v = self.prefactor * sum;
        self.cache.lock().unwrap().insert(key, v);
        v
    }

    pub fn at_zero(&self) -> Real {
        self.eval(&vec![0.0; self.dim])
    }

    /// Largest rate on the lattice (explicit-step stability diagnostics).
    pub fn max_gamma(&self) -> Real {
        self.gammas.iter().cloned().fold(0.0, Real::max)
    }
}

/// One-shot kernel evaluation without a reusable cache.
pub fn kernel_from_gamma(
    spec: &GammaSpec<Real>,
    lattice: &FrequencyLattice<Real>,
    displacement: &[Real],
) -> Result<Real> {
    Ok(SpatialKernel::new(spec, lattice)?.eval(displacement))
}

/// Gram matrix of the reduced flow, `G[j, i] = Gamma(x_j - x_i) / n`.
pub fn build_gram(dataset: &Dataset<Real>, kernel: &SpatialKernel) -> DMatrix<Real> {
    let n = dataset.len();
    let pts = dataset.points();
    let inv_n = 1.0 / n as Real;
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in j..n {
            let disp: Vec<Real> = pts[j].iter().zip(&pts[i]).map(|(a, b)| a - b).collect();
            let v = kernel.eval(&disp) * inv_n;
            g[(j, i)] = v;
            g[(i, j)] = v;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaSpec;
    use crate::lattice::FrequencyLattice;

    #[test]
    fn zero_displacement_is_plain_rate_sum() {
        let spec = GammaSpec::power_law(1.0, 1.0, 1).unwrap();
        let lat = FrequencyLattice::build(1, 5.0, 0.5, 0.25).unwrap();
        let k = SpatialKernel::new(&spec, &lat).unwrap();
        let expect: f64 = lat
            .nodes()
            .iter()
            .map(|n| spec.eval(n).unwrap())
            .sum::<f64>()
            * lat.cell_volume()
            / (2.0 * PI);
        assert!((k.at_zero() - expect).abs() < 1e-12 * expect.abs());
        assert!(k.at_zero() > 0.0);
    }

    #[test]
    fn constant_rate_factorizes_into_cosine_sum() {
        let spec = GammaSpec::tabulated(vec![0.0, 100.0], vec![3.0, 3.0]).unwrap();
        let lat = FrequencyLattice::build(1, 4.0, 0.5, 0.25).unwrap();
        let k = SpatialKernel::new(&spec, &lat).unwrap();
        let x = 0.9;
        let expect: f64 = 3.0
            * lat.cell_volume()
            * lat.nodes().iter().map(|n| (n[0] * x).cos()).sum::<f64>()
            / (2.0 * PI);
        assert!((k.eval(&[x]) - expect).abs() < 1e-12);
    }

    #[test]
    fn pure_b_kernel_differences_match_linear_spline_slope() {
        // distributional pair: (2 pi)^-1 int xi^-2 e^(i xi x) = -|x|/2 + const,
        // so Gamma(0.7) - Gamma(0.3) -> -(0.7 - 0.3)/2 = -0.2 on a fine lattice
        let spec = GammaSpec::power_law(0.0, 1.0, 1).unwrap();
        let mut prev = None;
        for (xi_max, d_xi) in [(100.0, 0.02), (200.0, 0.01)] {
            let lat = FrequencyLattice::build(1, xi_max, d_xi, d_xi / 2.0).unwrap();
            let k = SpatialKernel::new(&spec, &lat).unwrap();
            let diff = k.eval(&[0.7]) - k.eval(&[0.3]);
            assert!((diff - (-0.2)).abs() < 2e-3, "diff = {diff}");
            if let Some(p) = prev {
                let r: f64 = diff - p;
                assert!(r.abs() < 2e-3, "refinement not stabilizing: {r}");
            }
            prev = Some(diff);
        }
    }

    #[test]
    fn gram_is_symmetric_with_constant_diagonal() {
        let ds = Dataset::new(vec![vec![0.0], vec![0.4], vec![-1.1]], vec![1.0, 2.0, 3.0])
            .unwrap();
        let spec = GammaSpec::power_law(0.0, 1.0, 1).unwrap();
        let lat = FrequencyLattice::build(1, 20.0, 0.1, 0.05).unwrap();
        let k = SpatialKernel::new(&spec, &lat).unwrap();
        let g = build_gram(&ds, &k);
        assert_eq!(g[(0, 1)], g[(1, 0)]);
        let d0 = k.at_zero() / 3.0;
        for i in 0..3 {
            assert!((g[(i, i)] - d0).abs() < 1e-14);
        }
    }

    #[test]
    fn single_point_gram() {
        let ds = Dataset::new(vec![vec![0.3]], vec![1.0]).unwrap();
        let spec = GammaSpec::power_law(1.0, 0.0, 1).unwrap();
        let lat = FrequencyLattice::build(1, 10.0, 0.1, 0.05).unwrap();
        let k = SpatialKernel::new(&spec, &lat).unwrap();
        let g = build_gram(&ds, &k);
        assert_eq!(g.nrows(), 1);
        assert!((g[(0, 0)] - k.at_zero()).abs() < 1e-14);
    }

    #[test]
    fn random_gram_is_psd() {
        use rand::Rng;
        let mut rng = crate::rng::RandomSource::new(11).rng();
        let pts: Vec<Vec<f64>> = (0..5).map(|_| vec![rng.gen_range(-2.0..2.0)]).collect();
        let ds = Dataset::new(pts, vec![1.0; 5]).unwrap();
        let spec = GammaSpec::power_law(1.0, 1.0, 1).unwrap();
        let lat = FrequencyLattice::build(1, 30.0, 0.05, 0.025).unwrap();
        let k = SpatialKernel::new(&spec, &lat).unwrap();
        let g = build_gram(&ds, &k);
        let norm = g.norm();
        let eig = g.symmetric_eigen();
        for l in eig.eigenvalues.iter() {
            assert!(*l >= -1e-8 * norm, "eigenvalue {l} too negative");
        }
    }
}
