//! Strang splitting for ∂_t u + θ·∇_x u = I(u) on a periodic box.

mod field;
mod initial;
mod propagator;
mod run;
mod transport;

pub use field::{read_snapshot, write_snapshot, PhaseField, Snapshot, SpatialGrid};
pub use initial::{initial_mass, make_initial, InitialKind, InitialParams};
pub use propagator::{Backend, Propagator, SubstepIntegrals};
pub use run::{
    run, scattering_step, strang_step, write_diagnostics, write_diagnostics_file, DiagnosticsRecord, LevelSetRecord,
    RunOutput, Solver, SolverConfig, DIAGNOSTICS_HEADER, L2_STEP_TOL, MASS_TOL, STABILITY_TOL,
};
pub use transport::{transport_step, Transport};
