//! Frequency diagnostics.
//!
//! Frequency-unit bridging: this module works in cycles `k` (transform kernel
//! `exp(-i 2 pi k p)`), while the flow solvers work in angular frequency
//! `xi = 2 pi k`; conversions happen explicitly at every boundary.

mod bound;
mod convergence;
mod energy;
mod profile;
mod scaling;

pub use bound::{generalization_bound, BoundReport};
pub use convergence::{convergence_per_frequency, ConvergenceCurves};
pub use energy::{fp_energy_sampled, EnergyReport, UniformGrid, Window};
pub use profile::{first_principal_direction, nudft, nudft_raw, SpectralProfile};
pub use scaling::{error_vs_n_scaling, ScalingReport};
