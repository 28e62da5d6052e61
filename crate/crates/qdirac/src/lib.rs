//! Numerical treatment of a relativistic fermion scattering off a
//! quaternionic double Dirac-delta potential.
//!
//! The propagating (complex) and evanescent (quaternionic) channels of the
//! wavefunction couple through the deltas; [`matcher`] assembles and solves
//! the resulting 8x8 complex matching system, [`observables`] evaluates
//! probability density/current and the conservation constraint
//! |r|^2 + |t|^2 = 1, [`oracle`] re-derives the amplitudes by integrating the
//! coupled equations with Gaussian-regularized deltas, and [`sweep`] produces
//! the parameter-scan datasets behind the CLI.

pub mod error;
pub mod matcher;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod quat;
pub mod sweep;

pub use error::{Error, Result};
pub use matcher::{assemble_system, solve, solve_dense, verify_matching, ScatteringSolution};
pub use model::{dispersion, JumpVariant, ScatteringParams, Wavenumber};
pub use observables::{build_spinor, conservation_check, current_at, Region, RegionSpinor};
pub use oracle::{integrate, RegularizedProblem};
pub use quat::{Complex, Quaternion};
pub use sweep::{run_sweep, Axis, SweepResult, SweepSpec};
