//! FP-energy of interpolants and minimality comparisons.
//!
//! The interpolant is not integrable, so its energy is reported as a
//! *windowed* energy: the function is sampled on a padded spatial grid,
//! tapered with a raised cosine over the padding, transformed, and the
//! quadrature of `gamma^-1 |hhat|^2` is taken over the frequency lattice.
//! Scenario configs pin the window, and comparisons always share it.

use crate::dataset::Dataset;
use crate::error::{FplError, Result};
use crate::gamma::GammaSpec;
use crate::lattice::FrequencyLattice;
use crate::spectral::{fp_energy_sampled, EnergyReport, UniformGrid, Window};
use crate::Real;

use super::{steady_state, CpdKernelSpec, KernelInterpolant};

/// Padded, tapered grid spanning the centers of an interpolant: each axis is
/// extended by half the data extent on both sides, and the taper rolls off
/// exactly over that padding (so the window is 1 on the data itself).
pub fn interpolant_window(
    centers: &[Vec<Real>],
    lattice: &FrequencyLattice<Real>,
) -> (UniformGrid, Window) {
    let dim = centers[0].len();
    let mut starts = Vec::with_capacity(dim);
    let mut steps = Vec::with_capacity(dim);
    let mut counts = Vec::with_capacity(dim);
    let mut pads = Vec::with_capacity(dim);
    for axis in 0..dim {
        let min = centers.iter().map(|c| c[axis]).fold(Real::INFINITY, Real::min);
        let max = centers.iter().map(|c| c[axis]).fold(Real::NEG_INFINITY, Real::max);
        let extent = (max - min).max(1.0);
        let lo = min - extent / 2.0;
        let hi = max + extent / 2.0;
        // resolve comfortably past the lattice cutoff
        let target_dx = std::f64::consts::PI / (1.5 * lattice.xi_max());
        let count = (((hi - lo) / target_dx).ceil() as usize + 1).max(64);
        steps.push((hi - lo) / (count - 1) as Real);
        starts.push(lo);
        counts.push(count);
        pads.push(extent / 2.0);
    }
    (UniformGrid { starts, steps, counts }, Window { pads })
}

/// Windowed FP-energy of an interpolant over the given lattice.
pub fn fp_energy_of_interpolant(
    interpolant: &KernelInterpolant,
    spec: &GammaSpec<Real>,
    lattice: &FrequencyLattice<Real>,
) -> Result<EnergyReport> {
    let (grid, window) = interpolant_window(&interpolant.centers, lattice);
    let values: Vec<Real> = grid.points().map(|x| interpolant.evaluate(&x)).collect();
    fp_energy_sampled(&values, &grid, &window, spec, lattice)
}

#[derive(Debug)]
pub struct EnergyComparison {
    /// (candidate name, windowed energy, report) in input order; index 0 is
    /// the computed steady state.
    pub entries: Vec<(String, Real, EnergyReport)>,
    /// True when the steady state attains the minimum among all candidates.
    pub steady_is_minimal: bool,
}

/// Compare the steady-state energy against candidate interpolants of the same
/// data. Candidates must interpolate within `1e-6` (relative to the value
/// scale); a violator is rejected with its maximum violation.
pub fn energy_comparison(
    dataset: &Dataset<Real>,
    kernel: &CpdKernelSpec,
    spec: &GammaSpec<Real>,
    lattice: &FrequencyLattice<Real>,
    candidates: &[(&str, &dyn Fn(&[Real]) -> Real)],
) -> Result<EnergyComparison> {
    let steady = steady_state(dataset, kernel)?;
    let y_scale = dataset.values().iter().fold(0.0 as Real, |m, y| m.max(y.abs())).max(1.0);
    for (name, f) in candidates {
        let max_violation = dataset
            .points()
            .iter()
            .zip(dataset.values())
            .map(|(p, y)| (f(p) - y).abs())
            .fold(0.0, Real::max);
        if max_violation > 1e-6 * y_scale {
            return Err(FplError::InvalidSpec(format!(
                "candidate {name:?} does not interpolate the data \
                 (max violation {max_violation})"
            )));
        }
    }

    let (grid, window) = interpolant_window(&steady.centers, lattice);
    let mut entries = Vec::new();
    let steady_vals: Vec<Real> = grid.points().map(|x| steady.evaluate(&x)).collect();
    let steady_report = fp_energy_sampled(&steady_vals, &grid, &window, spec, lattice)?;
    entries.push(("steady_state".to_string(), steady_report.energy, steady_report));
    for (name, f) in candidates {
        let vals: Vec<Real> = grid.points().map(|x| f(&x)).collect();
        let report = fp_energy_sampled(&vals, &grid, &window, spec, lattice)?;
        entries.push((name.to_string(), report.energy, report));
    }
    let steady_energy = entries[0].1;
    let steady_is_minimal = entries.iter().all(|(_, e, _)| steady_energy <= *e * (1.0 + 1e-9));
    Ok(EnergyComparison { entries, steady_is_minimal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup_1d() -> (Dataset<Real>, GammaSpec<Real>, FrequencyLattice<Real>) {
        let ds = Dataset::new(
            vec![vec![-1.0], vec![-0.2], vec![0.5], vec![1.0]],
            vec![0.3, -0.6, 0.8, 0.1],
        )
        .unwrap();
        let spec = GammaSpec::power_law(0.0, 1.0, 1).unwrap();
        let lat = FrequencyLattice::build(1, 12.0, 0.05, 0.025).unwrap();
        (ds, spec, lat)
    }

    #[test]
    fn zero_interpolant_has_zero_energy() {
        let ds = Dataset::new(vec![vec![-1.0], vec![1.0]], vec![0.0, 0.0]).unwrap();
        let kernel = CpdKernelSpec::new(1, 0.0, 1.0).unwrap();
        let (_, spec, lat) = setup_1d();
        let h = steady_state(&ds, &kernel).unwrap();
        let e = fp_energy_of_interpolant(&h, &spec, &lat).unwrap();
        assert!(e.energy.abs() < 1e-20, "energy = {}", e.energy);
    }

    #[test]
    fn energy_scales_quadratically() {
        let (ds, spec, lat) = setup_1d();
        let kernel = CpdKernelSpec::new(1, 0.0, 1.0).unwrap();
        let h = steady_state(&ds, &kernel).unwrap();
        let scaled = Dataset::new(
            ds.points().to_vec(),
            ds.values().iter().map(|y| 3.0 * y).collect(),
        )
        .unwrap();
        let h3 = steady_state(&scaled, &kernel).unwrap();
        let e1 = fp_energy_of_interpolant(&h, &spec, &lat).unwrap().energy;
        let e3 = fp_energy_of_interpolant(&h3, &spec, &lat).unwrap().energy;
        assert!((e3 - 9.0 * e1).abs() < 1e-9 * e3.abs(), "e1 = {e1}, e3 = {e3}");
    }

    #[test]
    fn linear_spline_beats_cubic_under_pure_b_rate() {
        let (ds, spec, lat) = setup_1d();
        let linear = steady_state(&ds, &CpdKernelSpec::new(1, 0.0, 1.0).unwrap()).unwrap();
        let cubic = steady_state(&ds, &CpdKernelSpec::new(1, 1.0, 0.0).unwrap()).unwrap();
        let el = fp_energy_of_interpolant(&linear, &spec, &lat).unwrap().energy;
        let ec = fp_energy_of_interpolant(&cubic, &spec, &lat).unwrap().energy;
        assert!(el <= ec * (1.0 + 1e-6), "linear {el} vs cubic {ec}");
    }

    #[test]
    fn steady_state_is_trivially_minimal_against_itself() {
        let (ds, spec, lat) = setup_1d();
        let kernel = CpdKernelSpec::new(1, 0.0, 1.0).unwrap();
        let h = steady_state(&ds, &kernel).unwrap();
        let eval = |x: &[Real]| h.evaluate(x);
        let report =
            energy_comparison(&ds, &kernel, &spec, &lat, &[("self", &eval)]).unwrap();
        assert!(report.steady_is_minimal);
    }

    #[test]
    fn non_interpolating_candidate_rejected() {
        let (ds, spec, lat) = setup_1d();
        let kernel = CpdKernelSpec::new(1, 0.0, 1.0).unwrap();
        let zero = |_: &[Real]| 0.0;
        let err = energy_comparison(&ds, &kernel, &spec, &lat, &[("zero", &zero)]);
        assert!(matches!(err, Err(FplError::InvalidSpec(_))));
    }

    #[test]
    fn bump_perturbation_raises_energy() {
        let (ds, spec, lat) = setup_1d();
        let kernel = CpdKernelSpec::new(1, 0.0, 1.0).unwrap();
        let h = steady_state(&ds, &kernel).unwrap();
        let h2 = h.clone();
        let pts = ds.points().to_vec();
        let bump = move |x: &[Real]| {
            // vanishes at every center
            let prod: Real = pts.iter().map(|p| (x[0] - p[0]).sin()).product();
            h2.evaluate(x) + 0.5 * prod * (-x[0] * x[0]).exp()
        };
        let report =
            energy_comparison(&ds, &kernel, &spec, &lat, &[("bumped", &bump)]).unwrap();
        assert!(report.steady_is_minimal);
        assert!(report.entries[1].1 > report.entries[0].1);
    }
}
