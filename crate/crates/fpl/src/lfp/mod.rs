//! Linear frequency-domain flow: `d/dt uhat(xi,t) = -gamma(xi) * urho(xi,t)`.
//!
//! Two integrators are provided. [`ReducedFlow`] is exact in time: on the
//! training points the dynamics close into the linear ODE `dr/dt = -G r`
//! with a Gram matrix built from the spatial kernel of `gamma`, solved by
//! symmetric eigendecomposition. [`SpectralFlow`] steps the lattice field
//! explicitly and exists to expose per-frequency dynamics (dissipation
//! curves, convergence ordering); the reduced flow is the reference.

mod kernel;
mod reduced;
mod spectral;
mod trajectory;

pub use kernel::{build_gram, kernel_from_gamma, SpatialKernel};
pub use reduced::ReducedFlow;
pub use spectral::{frequency_dissipation, SpectralFlow, SpectralState};
pub use trajectory::{FlowTrajectory, SpectralSnapshots};
