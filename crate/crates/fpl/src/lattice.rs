//! Bounded, uniform frequency lattices.
//!
//! A lattice discretizes `xi in R^d` as `k * d_xi` for integer multi-indices
//! `k`, truncated componentwise at `xi_max` and with an epsilon-ball around
//! the origin removed (power-law rates are singular there; the mean mode is
//! carried by the polynomial tail of the spline kernels and by antisymmetric
//! network initialization instead).

use crate::error::{FplError, Result};
use crate::scalar::{norm, Scalar};

pub const DEFAULT_NODE_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyLattice<F: Scalar> {
    dim: usize,
    xi_max: F,
    d_xi: F,
    eps_zero: F,
    nodes: Vec<Vec<F>>,
}

impl<F: Scalar> FrequencyLattice<F> {
    pub fn build(dim: usize, xi_max: F, d_xi: F, eps_zero: F) -> Result<Self> {
        Self::build_with_budget(dim, xi_max, d_xi, eps_zero, DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_budget(
        dim: usize,
        xi_max: F,
        d_xi: F,
        eps_zero: F,
        budget: usize,
    ) -> Result<Self> {
        if dim == 0 || d_xi <= F::zero() || xi_max < d_xi || eps_zero < F::zero() {
            return Err(FplError::InvalidSpec(
                "lattice needs d >= 1, d_xi > 0, xi_max >= d_xi, eps_zero >= 0".into(),
            ));
        }
        if eps_zero >= d_xi {
            return Err(FplError::InvalidSpec("eps_zero must be smaller than d_xi".into()));
        }
        // Tolerant cutoff so xi_max = k * d_xi keeps the boundary node despite
        // floating-point rounding of the ratio.
        let ratio = (xi_max / d_xi).to_f64().unwrap();
        let k_max = (ratio * (1.0 + 1e-12) + 1e-9).floor() as i64;
        let per_axis = (2 * k_max + 1) as u128;
        let mut total: u128 = 1;
        for _ in 0..dim {
            total = total.saturating_mul(per_axis);
        }
        if total > budget as u128 {
            return Err(FplError::Resource(format!(
                "lattice would have {total} nodes, budget is {budget}"
            )));
        }
        let mut nodes = Vec::new();
        let mut index = vec![-k_max; dim];
        'outer: loop {
            let node: Vec<F> = index.iter().map(|&k| F::from_i64(k).unwrap() * d_xi).collect();
            if norm(&node) >= eps_zero {
                nodes.push(node);
            }
            for axis in (0..dim).rev() {
                if index[axis] < k_max {
                    index[axis] += 1;
                    for slot in index.iter_mut().skip(axis + 1) {
                        *slot = -k_max;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        Ok(Self { dim, xi_max, d_xi, eps_zero, nodes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi_max(&self) -> F {
        self.xi_max
    }

    pub fn d_xi(&self) -> F {
        self.d_xi
    }

    pub fn eps_zero(&self) -> F {
        self.eps_zero
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<F>] {
        &self.nodes
    }

    /// Quadrature weight of one node, `d_xi^d`.
    pub fn cell_volume(&self) -> F {
        let mut v = F::one();
        for _ in 0..self.dim {
            v = v * self.d_xi;
        }
        v
    }
}
