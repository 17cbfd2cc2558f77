//! Nonuniform DFT along a direction, and the direction itself.

use std::path::Path;

use num_complex::Complex;

use crate::error::{FplError, Result};
use crate::scalar::dot;
use crate::{CReal, Real};

/// Amplitude/phase of a transform on a 1-d frequency grid (cycles).
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub frequencies: Vec<Real>,
    pub amplitudes: Vec<Real>,
    pub phases: Vec<Real>,
    /// Which function/checkpoint produced this profile.
    pub provenance: String,
}

impl SpectralProfile {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut wtr = csv::Writer::from_path(path)?;
        wtr.write_record(["k", "amplitude", "phase"])?;
        for i in 0..self.frequencies.len() {
            wtr.write_record(&[
                format!("{}", self.frequencies[i]),
                format!("{}", self.amplitudes[i]),
                format!("{}", self.phases[i]),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Top eigenvector of the centered covariance, sign fixed by making the
/// largest-magnitude component positive.
pub fn first_principal_direction(points: &[Vec<Real>]) -> Result<Vec<Real>> {
    if points.len() < 2 {
        return Err(FplError::InvalidSpec("need at least two points".into()));
    }
    let d = points[0].len();
    let n = points.len() as Real;
    let mut mean = vec![0.0; d];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x / n;
        }
    }
    let mut cov = nalgebra::DMatrix::zeros(d, d);
    for p in points {
        for i in 0..d {
            for j in i..d {
                let v = (p[i] - mean[i]) * (p[j] - mean[j]) / n;
                cov[(i, j)] += v;
                if i != j {
                    cov[(j, i)] += v;
                }
            }
        }
    }
    let eig = cov.symmetric_eigen();
    let (mut best, mut best_l) = (0, Real::NEG_INFINITY);
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        if *l > best_l {
            best = i;
            best_l = *l;
        }
    }
    if best_l <= 1e-14 {
        return Err(FplError::Degenerate("zero covariance: all points coincide".into()));
    }
    let mut dir: Vec<Real> = eig.eigenvectors.column(best).iter().cloned().collect();
    let lead = dir
        .iter()
        .cloned()
        .fold(0.0, |m: Real, x| if x.abs() > m.abs() { x } else { m });
    if lead < 0.0 {
        for x in dir.iter_mut() {
            *x = -*x;
        }
    }
    Ok(dir)
}

fn transform(
    projections: &[Real],
    values: &[Real],
    k_grid: &[Real],
    provenance: &str,
) -> SpectralProfile {
    let n = values.len() as Real;
    let mut amplitudes = Vec::with_capacity(k_grid.len());
    let mut phases = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let mut acc: CReal = Complex::new(0.0, 0.0);
        for (&p, &v) in projections.iter().zip(values) {
            let phase = -2.0 * std::f64::consts::PI * k * p;
            acc += Complex::new(v * phase.cos(), v * phase.sin());
        }
        acc /= n;
        amplitudes.push(acc.norm());
        phases.push(acc.arg());
    }
    SpectralProfile {
        frequencies: k_grid.to_vec(),
        amplitudes,
        phases,
        provenance: provenance.to_string(),
    }
}

/// Project onto `direction`, affinely rescale projections to `[0, 1]` (so `k`
/// is in cycles per data extent), and transform by direct summation.
pub fn nudft(
    points: &[Vec<Real>],
    values: &[Real],
    direction: &[Real],
    k_grid: &[Real],
    provenance: &str,
) -> Result<SpectralProfile> {
    let projections = project(points, values, direction)?;
    let lo = projections.iter().cloned().fold(Real::INFINITY, Real::min);
    let hi = projections.iter().cloned().fold(Real::NEG_INFINITY, Real::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let rescaled: Vec<Real> = projections.iter().map(|p| (p - lo) / span).collect();
    Ok(transform(&rescaled, values, k_grid, provenance))
}

/// Raw-coordinate variant: projections are used as-is.
pub fn nudft_raw(
    points: &[Vec<Real>],
    values: &[Real],
    direction: &[Real],
    k_grid: &[Real],
    provenance: &str,
) -> Result<SpectralProfile> {
    let projections = project(points, values, direction)?;
    Ok(transform(&projections, values, k_grid, provenance))
}

fn project(points: &[Vec<Real>], values: &[Real], direction: &[Real]) -> Result<Vec<Real>> {
    if points.len() != values.len() {
        return Err(FplError::Shape("points/values length mismatch".into()));
    }
    let norm = crate::scalar::norm(direction);
    if (norm - 1.0).abs() > 1e-8 {
        return Err(FplError::InvalidSpec(format!("direction must be unit-norm, got {norm}")));
    }
    Ok(points.iter().map(|p| dot(p, direction)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn one_d_direction_is_unity() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert_eq!(first_principal_direction(&pts).unwrap(), vec![1.0]);
    }

    #[test]
    fn axis_aligned_points_give_axis() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![-2.0, 0.0]];
        let dir = first_principal_direction(&pts).unwrap();
        assert!((dir[0] - 1.0).abs() < 1e-12 && dir[1].abs() < 1e-12);
    }

    #[test]
    fn anisotropic_cloud_recovers_long_axis() {
        let mut rng = crate::rng::RandomSource::new(21).rng();
        let normal = |rng: &mut rand_chacha::ChaCha8Rng| {
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        };
        let pts: Vec<Vec<f64>> =
            (0..1000).map(|_| vec![3.0 * normal(&mut rng), normal(&mut rng)]).collect();
        let dir = first_principal_direction(&pts).unwrap();
        let angle = dir[1].atan2(dir[0]).abs().to_degrees();
        assert!(angle < 5.0, "angle = {angle} deg");
    }

    #[test]
    fn degenerate_cloud_rejected() {
        // distinct points but zero spread along every axis is impossible;
        // emulate near-coincidence instead
        let pts = vec![vec![1.0, 1.0]; 4];
        assert!(first_principal_direction(&pts).is_err());
    }

    #[test]
    fn constant_values_peak_at_zero() {
        let pts: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 / 49.0]).collect();
        let vals = vec![2.5; 50];
        let prof = nudft(&pts, &vals, &[1.0], &[0.0, 1.0, 2.0], "const").unwrap();
        assert!((prof.amplitudes[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn tone_peaks_at_its_frequency() {
        let n = 400;
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 / (n - 1) as f64]).collect();
        let vals: Vec<f64> = pts
            .iter()
            .map(|p| (2.0 * std::f64::consts::PI * 5.0 * p[0]).cos())
            .collect();
        let k_grid: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let prof = nudft(&pts, &vals, &[1.0], &k_grid, "tone").unwrap();
        let (mut best, mut best_a) = (0, 0.0);
        for (i, a) in prof.amplitudes.iter().enumerate() {
            if *a > best_a {
                best = i;
                best_a = *a;
            }
        }
        assert_eq!(prof.frequencies[best], 5.0);
        // direct-summation oracle at the peak
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, v) in pts.iter().zip(&vals) {
            let ph = -2.0 * std::f64::consts::PI * 5.0 * p[0];
            re += v * ph.cos();
            im += v * ph.sin();
        }
        let oracle = (re * re + im * im).sqrt() / n as f64;
        assert!((best_a - oracle).abs() < 1e-12);
    }

    #[test]
    fn uniform_grid_matches_plain_dft() {
        // restricted to a uniform grid and integer k, the transform is the
        // standard DFT up to the 1/n normalization
        let n = 32;
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 / n as f64]).collect();
        let vals: Vec<f64> = (0..n).map(|i| ((i * i) as f64).sin()).collect();
        let k_grid: Vec<f64> = (0..n).map(|k| k as f64).collect();
        // raw mode: projections already in [0,1)
        let prof = nudft_raw(&pts, &vals, &[1.0], &k_grid, "dft").unwrap();
        for (ki, &k) in k_grid.iter().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                let ph = -2.0 * std::f64::consts::PI * k * j as f64 / n as f64;
                acc += Complex::new(v * ph.cos(), v * ph.sin());
            }
            acc /= n as f64;
            assert!((prof.amplitudes[ki] - acc.norm()).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn nudft_linear_in_values(
            vals in proptest::collection::vec(-3.0f64..3.0, 3..10),
            c in -2.0f64..2.0,
        ) {
            let pts: Vec<Vec<f64>> =
                (0..vals.len()).map(|i| vec![(i as f64 * 0.618).fract()]).collect();
            let other: Vec<f64> = vals.iter().map(|v| 1.0 - v).collect();
            let combo: Vec<f64> = vals.iter().zip(&other).map(|(a, b)| c * a + b).collect();
            let ks = [0.0, 1.0, 3.0];
            // raw mode keeps the projection map independent of the values
            let pa = nudft_raw(&pts, &vals, &[1.0], &ks, "a").unwrap();
            let pb = nudft_raw(&pts, &other, &[1.0], &ks, "b").unwrap();
            let pc = nudft_raw(&pts, &combo, &[1.0], &ks, "c").unwrap();
            for i in 0..ks.len() {
                let za = Complex::from_polar(pa.amplitudes[i], pa.phases[i]);
                let zb = Complex::from_polar(pb.amplitudes[i], pb.phases[i]);
                let zc = Complex::from_polar(pc.amplitudes[i], pc.phases[i]);
                let expect = za * c + zb;
                prop_assert!((zc - expect).norm() <= 1e-12 * (1.0 + zc.norm()));
            }
        }

        #[test]
        fn direction_invariant_under_translation(shift in -50.0f64..50.0) {
            let mut rng = crate::rng::RandomSource::new(5).rng();
            let pts: Vec<Vec<f64>> = (0..40)
                .map(|_| vec![rng.gen_range(-1.0..1.0) * 2.0, rng.gen_range(-1.0..1.0)])
                .collect();
            let shifted: Vec<Vec<f64>> =
                pts.iter().map(|p| vec![p[0] + shift, p[1] + shift]).collect();
            let d0 = first_principal_direction(&pts).unwrap();
            let d1 = first_principal_direction(&shifted).unwrap();
            for (a, b) in d0.iter().zip(&d1) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
