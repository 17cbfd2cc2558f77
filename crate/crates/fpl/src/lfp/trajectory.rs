//! Checkpointed flow trajectories and their CSV exports.

use std::path::Path;

use crate::error::{FplError, Result};
use crate::{CReal, Real};

/// Per-node spectral snapshots recorded along a [`super::SpectralFlow`] run.
#[derive(Debug, Clone)]
pub struct SpectralSnapshots {
    /// Lattice nodes the snapshots live on.
    pub nodes: Vec<Vec<Real>>,
    /// `uhat = hhat - fhat*` restricted to the lattice, one row per checkpoint.
    pub uhat: Vec<Vec<CReal>>,
    /// Empirical transform of the residuals, one row per checkpoint.
    pub urho: Vec<Vec<CReal>>,
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    times: Vec<Real>,
    losses: Vec<Real>,
    residuals: Vec<Vec<Real>>,
    spectral: Option<SpectralSnapshots>,
}

impl FlowTrajectory {
    pub(crate) fn new(
        times: Vec<Real>,
        losses: Vec<Real>,
        residuals: Vec<Vec<Real>>,
        spectral: Option<SpectralSnapshots>,
    ) -> Result<Self> {
        if times.len() != losses.len() || times.len() != residuals.len() {
            return Err(FplError::Shape("trajectory arrays must share a length".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FplError::InvalidSpec("checkpoint times must strictly increase".into()));
        }
        if losses.iter().any(|l| !l.is_finite()) {
            return Err(FplError::Numerical("non-finite loss in trajectory".into()));
        }
        Ok(Self { times, losses, residuals, spectral })
    }

    pub fn times(&self) -> &[Real] {
        &self.times
    }

    pub fn losses(&self) -> &[Real] {
        &self.losses
    }

    /// Residual vector at checkpoint `k`.
    pub fn residuals(&self, k: usize) -> &[Real] {
        &self.residuals[k]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn spectral(&self) -> Option<&SpectralSnapshots> {
        self.spectral.as_ref()
    }

    /// CSV export: `time, loss, residual_0..residual_{n-1}`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        let n = self.residuals.first().map_or(0, |r| r.len());
        let mut header = vec!["time".to_string(), "loss".to_string()];
        header.extend((0..n).map(|i| format!("residual_{i}")));
        wtr.write_record(&header)?;
        for k in 0..self.times.len() {
            let mut row = vec![format!("{}", self.times[k]), format!("{}", self.losses[k])];
            row.extend(self.residuals[k].iter().map(|r| format!("{r}")));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// CSV export of spectral snapshots: `time, xi_0..xi_{d-1}, re_uhat, im_uhat`.
    pub fn write_spectral_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let snaps = self
            .spectral
            .as_ref()
            .ok_or_else(|| FplError::InvalidSpec("trajectory has no spectral snapshots".into()))?;
        let mut wtr = csv::Writer::from_path(path)?;
        let d = snaps.nodes.first().map_or(0, |n| n.len());
        let mut header = vec!["time".to_string()];
        header.extend((0..d).map(|i| format!("xi_{i}")));
        header.push("re_uhat".into());
        header.push("im_uhat".into());
        wtr.write_record(&header)?;
        for (k, t) in self.times.iter().enumerate() {
            for (node, u) in snaps.nodes.iter().zip(&snaps.uhat[k]) {
                let mut row = vec![format!("{t}")];
                row.extend(node.iter().map(|x| format!("{x}")));
                row.push(format!("{}", u.re));
                row.push(format!("{}", u.im));
                wtr.write_record(&row)?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}
