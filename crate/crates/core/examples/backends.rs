//! Spectral and projected scattering backends on the same data.
use prte::fracop::PlaneGrid;
use prte::geom::Dim;
use prte::kernels::{Kernel, KernelSpec, Remainder};
use prte::scatter::SphereQuadrature;
use prte::solver::{make_initial, run, Backend, InitialKind, InitialParams, Solver, SolverConfig, SpatialGrid};

fn main() -> prte::error::Result<()> {
    let dim = Dim::TWO;
    let kernel = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::Constant(0.1))?);
    let p = InitialParams { sigma: 0.8, kappa: 2.0, ..Default::default() };
    let u0 = make_initial(InitialKind::GaussianBeam, &p, SpatialGrid::new(dim, 8.0, 16)?, SphereQuadrature::circle(32)?)?;
    let mut cfg = SolverConfig::new(kernel, 0.01, 0.5, 15);
    let spectral = run(&cfg, &u0)?.final_state;
    cfg.backend = Backend::ProjectedPlane;
    cfg.plane = Some(PlaneGrid::new(dim, 8.0, 2048)?);
    let solver = Solver::new(cfg.clone(), &u0)?;
    println!("projected RK4 dt bound: {:.4e}", solver.propagator().dt_bound().unwrap_or(f64::INFINITY));
    let projected = solver.run(&u0)?.final_state;
    println!("relative L² gap at t = {}: {:.3e}", cfg.t_end, projected.relative_distance(&spectral));
    Ok(())
}
