//! Saddle-point interpolation solve.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::scalar::norm;
use crate::Real;

use super::CpdKernelSpec;

/// Post-solve verification tolerances (relative).
const SADDLE_RESIDUAL_TOL: Real = 1e-10;
const ORTHOGONALITY_TOL: Real = 1e-8;

/// The minimizer of the FP-energy among interpolants:
/// `h(x) = sum_i alpha_i k(x - x_i) + poly(x)` with
/// `sum_i alpha_i q(x_i) = 0` for every polynomial `q` of degree < `m_poly`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelInterpolant {
    pub kernel: CpdKernelSpec,
    pub centers: Vec<Vec<Real>>,
    pub alpha: Vec<Real>,
    /// Tail coefficients: `[c]` for `m_poly = 1`, `[c, g_0..g_{d-1}]` for 2.
    pub poly: Vec<Real>,
}

impl KernelInterpolant {
    pub fn evaluate(&self, x: &[Real]) -> Real {
        assert_eq!(x.len(), self.kernel.dim, "query dimension mismatch");
        let mut acc = 0.0;
        for (c, &a) in self.centers.iter().zip(&self.alpha) {
            let r = dist(x, c);
            acc += a * self.kernel.radial(r);
        }
        acc += self.poly[0];
        if self.kernel.m_poly == 2 {
            for (k, &xk) in x.iter().enumerate() {
                acc += self.poly[1 + k] * xk;
            }
        }
        acc
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }

    /// Dump predictions on a list of query points as CSV `x0..,h`.
    pub fn write_predictions_csv(
        &self,
        queries: &[Vec<Real>],
        path: impl AsRef<Path>,
    ) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let mut header: Vec<String> = (0..self.kernel.dim).map(|i| format!("x{i}")).collect();
        header.push("h".into());
        wtr.write_record(&header)?;
        for q in queries {
            let mut row: Vec<String> = q.iter().map(|x| format!("{x}")).collect();
            row.push(format!("{}", self.evaluate(q)));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn dist(a: &[Real], b: &[Real]) -> Real {
    let d: Vec<Real> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d)
}

/// Polynomial basis matrix at the centers: a ones column, plus coordinate
/// columns when the tail is affine.
fn poly_basis(points: &[Vec<Real>], m_poly: usize, dim: usize) -> DMatrix<Real> {
    let n = points.len();
    let q = if m_poly == 1 { 1 } else { dim + 1 };
    let mut p = DMatrix::zeros(n, q);
    for (i, pt) in points.iter().enumerate() {
        p[(i, 0)] = 1.0;
        if m_poly == 2 {
            for k in 0..dim {
                p[(i, 1 + k)] = pt[k];
            }
        }
    }
    p
}

/// Solve `[K P; P^T 0] [alpha; p] = [y; 0]` for the steady-state interpolant.
///
/// If the full saddle system is singular (centers confined to an affine
/// subspace with an affine tail), the polynomial basis is reduced to the
/// column span of `P` and the tail coefficients are mapped back minimum-norm.
pub fn steady_state(dataset: &Dataset<Real>, kernel: &CpdKernelSpec) -> Result<KernelInterpolant> {
    if dataset.dim() != kernel.dim {
        return Err(FplError::Shape("dataset/kernel dimension mismatch".into()));
    }
    let n = dataset.len();
    let pts = dataset.points();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.radial(dist(&pts[i], &pts[j]));
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    let p_full = poly_basis(pts, kernel.m_poly, kernel.dim);

    // Reduce P to its column span so degenerate geometries stay solvable.
    let svd = p_full.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|s| **s > 1e-12 * smax).count();
    let q_full = p_full.ncols();
    let (p, v_r) = if rank < q_full {
        let u = svd.u.as_ref().expect("svd with u");
        let v_t = svd.v_t.as_ref().expect("svd with v_t");
        let mut p_red = DMatrix::zeros(n, rank);
        let mut v_r = DMatrix::zeros(q_full, rank);
        for c in 0..rank {
            let s = svd.singular_values[c];
            for r in 0..n {
                p_red[(r, c)] = u[(r, c)] * s;
            }
            for r in 0..q_full {
                v_r[(r, c)] = v_t[(c, r)];
            }
        }
        (p_red, Some(v_r))
    } else {
        (p_full.clone(), None)
    };
    let q = p.ncols();

    let dim_sys = n + q;
    let mut sys = DMatrix::zeros(dim_sys, dim_sys);
    sys.view_mut((0, 0), (n, n)).copy_from(&k);
    sys.view_mut((0, n), (n, q)).copy_from(&p);
    sys.view_mut((n, 0), (q, n)).copy_from(&p.transpose());
    let mut rhs = DVector::zeros(dim_sys);
    for (i, y) in dataset.values().iter().enumerate() {
        rhs[i] = *y;
    }

    let lu = sys.clone().full_piv_lu();
    let sol = lu.solve(&rhs).ok_or_else(|| degenerate_error(pts, kernel))?;

    let residual = (&sys * &sol - &rhs).norm() / rhs.norm().max(1e-30);
    if residual > SADDLE_RESIDUAL_TOL || sol.iter().any(|v| !v.is_finite()) {
        return Err(degenerate_error(pts, kernel));
    }

    let alpha: Vec<Real> = sol.as_slice()[..n].to_vec();
    let p_red: Vec<Real> = sol.as_slice()[n..].to_vec();
    let mut poly = vec![0.0; q_full];
    match &v_r {
        Some(v_r) => {
            let mapped = v_r * DVector::from_vec(p_red);
            poly.copy_from_slice(mapped.as_slice());
        }
        None => poly.copy_from_slice(&p_red),
    }

    // polynomial orthogonality of the coefficients
    let a_vec = DVector::from_vec(alpha.clone());
    let ortho = (p_full.transpose() * &a_vec).amax();
    let a_scale = a_vec.amax().max(1e-30);
    if ortho > ORTHOGONALITY_TOL * a_scale.max(1.0) {
        return Err(FplError::Numerical(format!(
            "polynomial orthogonality violated by {ortho}"
        )));
    }

    let interp = KernelInterpolant {
        kernel: kernel.clone(),
        centers: pts.to_vec(),
        alpha,
        poly,
    };
    // interpolation invariant
    let y_scale = dataset.values().iter().fold(0.0 as Real, |m, y| m.max(y.abs())).max(1.0);
    for (pt, y) in pts.iter().zip(dataset.values()) {
        let h = interp.evaluate(pt);
        if (h - y).abs() > 1e-8 * y_scale {
            return Err(FplError::Numerical(format!(
                "interpolation failed at a center: h = {h}, y = {y}"
            )));
        }
    }
    Ok(interp)
}

fn degenerate_error(pts: &[Vec<Real>], kernel: &CpdKernelSpec) -> FplError {
    FplError::Degenerate(format!(
        "singular saddle system: {} centers in R^{} lie in an affine subspace \
         incompatible with a degree-{} tail",
        pts.len(),
        kernel.dim,
        kernel.m_poly - 1
    ))
}
