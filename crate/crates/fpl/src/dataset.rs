//! Training datasets: scattered points with scalar targets.

use std::path::Path;

use crate::error::{FplError, Result};
use crate::scalar::Scalar;

/// `n` training pairs `(x_i, y_i)` with `x_i` in `R^d`, plus an optional
/// held-out evaluation set of the same shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F: Scalar> {
    points: Vec<Vec<F>>,
    values: Vec<F>,
    dim: usize,
    eval_points: Option<Vec<Vec<F>>>,
    eval_values: Option<Vec<F>>,
}

impl<F: Scalar> Dataset<F> {
    /// Points must be non-empty, share a dimension, and be pairwise distinct
    /// (kernel interpolation is otherwise unsolvable).
    pub fn new(points: Vec<Vec<F>>, values: Vec<F>) -> Result<Self> {
        if points.is_empty() {
            return Err(FplError::InvalidSpec("dataset needs at least one point".into()));
        }
        if points.len() != values.len() {
            return Err(FplError::Shape(format!(
                "{} points vs {} values",
                points.len(),
                values.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(FplError::InvalidSpec("zero-dimensional points".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(FplError::Shape(format!(
                "point of dimension {} in a {}-dimensional dataset",
                p.len(),
                dim
            )));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(FplError::InvalidSpec(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Self { points, values, dim, eval_points: None, eval_values: None })
    }

    pub fn with_eval(mut self, points: Vec<Vec<F>>, values: Vec<F>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(FplError::Shape("eval points/values length mismatch".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != self.dim) {
            return Err(FplError::Shape(format!(
                "eval point of dimension {} in a {}-dimensional dataset",
                p.len(),
                self.dim
            )));
        }
        self.eval_points = Some(points);
        self.eval_values = Some(values);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn eval_set(&self) -> Option<(&[Vec<F>], &[F])> {
        match (&self.eval_points, &self.eval_values) {
            (Some(p), Some(v)) => Some((p.as_slice(), v.as_slice())),
            _ => None,
        }
    }

    /// Sample a dataset from an explicit target function on given points.
    pub fn from_fn(points: Vec<Vec<F>>, target: impl Fn(&[F]) -> F) -> Result<Self> {
        let values = points.iter().map(|p| target(p)).collect();
        Self::new(points, values)
    }
}

impl Dataset<f64> {
    /// Read a CSV with header `x0,...,x{d-1},y` (row order preserved).
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        let ncols = headers.len();
        if ncols < 2 || headers.get(ncols - 1) != Some("y") {
            return Err(FplError::InvalidSpec(
                "dataset CSV must have columns x0,...,x{d-1},y".into(),
            ));
        }
        let mut points = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut row: Vec<f64> = Vec::with_capacity(ncols);
            for field in rec.iter() {
                row.push(field.trim().parse::<f64>().map_err(|e| {
                    FplError::InvalidSpec(format!("bad float {field:?} in dataset CSV: {e}"))
                })?);
            }
            let y = row.pop().ok_or_else(|| FplError::InvalidSpec("empty CSV row".into()))?;
            points.push(row);
            values.push(y);
        }
        Self::new(points, values)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let mut header: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        wtr.write_record(&header)?;
        for (p, y) in self.points.iter().zip(&self.values) {
            let mut row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
            row.push(format!("{y}"));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
