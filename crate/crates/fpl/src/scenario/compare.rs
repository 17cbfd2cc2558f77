//! Pairwise comparison of predictors evaluated on a shared grid.

use serde::{Deserialize, Serialize};

use crate::error::{FplError, Result};
use crate::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairMetrics {
    pub first: String,
    pub second: String,
    pub max_abs_diff: Real,
    pub mean_abs_diff: Real,
    /// Relative L2 difference, normalized by the L2 norm of the first series.
    pub rel_l2_diff: Real,
    pub pearson: Real,
    /// Least-squares fit second ~ slope * first + intercept.
    pub slope: Real,
    pub intercept: Real,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub n_points: usize,
    pub pairs: Vec<PairMetrics>,
}

/// All-pairs metrics over predictor outputs on a common grid.
pub fn compare_predictors(predictors: &[(&str, &[Real])]) -> Result<ComparisonTable> {
    if predictors.len() < 2 {
        return Err(FplError::InvalidSpec("need at least two predictors".into()));
    }
    let n = predictors[0].1.len();
    if n == 0 {
        return Err(FplError::InvalidSpec("empty evaluation grid".into()));
    }
    if predictors.iter().any(|(_, v)| v.len() != n) {
        return Err(FplError::Shape("predictors evaluated on different grids".into()));
    }
    let mut pairs = Vec::new();
    for i in 0..predictors.len() {
        for j in i + 1..predictors.len() {
            let (na, a) = predictors[i];
            let (nb, b) = predictors[j];
            pairs.push(pair_metrics(na, a, nb, b));
        }
    }
    Ok(ComparisonTable { n_points: n, pairs })
}

fn pair_metrics(name_a: &str, a: &[Real], name_b: &str, b: &[Real]) -> PairMetrics {
    let n = a.len() as Real;
    let max_abs_diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, Real::max);
    let mean_abs_diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<Real>() / n;
    let diff2: Real = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let norm_a2: Real = a.iter().map(|x| x * x).sum();
    let rel_l2_diff = if norm_a2 > 0.0 { (diff2 / norm_a2).sqrt() } else { diff2.sqrt() };

    let (ma, mb) = (a.iter().sum::<Real>() / n, b.iter().sum::<Real>() / n);
    let saa: Real = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let sbb: Real = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    let sab: Real = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let pearson = if saa > 0.0 && sbb > 0.0 { sab / (saa * sbb).sqrt() } else { 1.0 };
    let slope = if saa > 0.0 { sab / saa } else { 0.0 };
    PairMetrics {
        first: name_a.to_string(),
        second: name_b.to_string(),
        max_abs_diff,
        mean_abs_diff,
        rel_l2_diff,
        pearson,
        slope,
        intercept: mb - slope * ma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn predictor_vs_itself() {
        let v = vec![1.0, -2.0, 0.5, 3.0];
        let t = compare_predictors(&[("a", &v), ("b", &v)]).unwrap();
        let p = &t.pairs[0];
        assert_eq!(p.max_abs_diff, 0.0);
        assert_relative_eq!(p.pearson, 1.0);
        assert_relative_eq!(p.slope, 1.0);
        assert_relative_eq!(p.intercept, 0.0);
    }

    #[test]
    fn affine_relation_recovered() {
        let a: Vec<Real> = (0..50).map(|i| (i as Real * 0.3).sin()).collect();
        let b: Vec<Real> = a.iter().map(|x| 2.0 * x + 1.0).collect();
        let t = compare_predictors(&[("a", &a), ("b", &b)]).unwrap();
        let p = &t.pairs[0];
        assert_relative_eq!(p.pearson, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(p.intercept, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn shape_errors() {
        let a = vec![1.0, 2.0];
        let b = vec![1.0];
        assert!(compare_predictors(&[("a", &a)]).is_err());
        assert!(compare_predictors(&[("a", &a), ("b", &b)]).is_err());
    }
}
