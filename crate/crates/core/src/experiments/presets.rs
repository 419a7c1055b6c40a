//! Desk-scale configurations used by the acceptance suite, the examples and the CLI defaults.

use super::studies::bump;
use crate::error::Result;
use crate::fracop::{PlaneField, PlaneGrid};
use crate::geom::Dim;
use crate::kernels::{Kernel, KernelSpec, Remainder};
use crate::scatter::SphereQuadrature;
use crate::solver::{make_initial, InitialKind, InitialParams, PhaseField, SolverConfig, SpatialGrid};

/// A solver configuration together with its initial state.
#[derive(Debug, Clone)]
pub struct Setup {
    pub cfg: SolverConfig,
    pub u0: PhaseField,
}

fn limiting(dim: Dim, s: f64, h: f64) -> Result<Kernel> {
    let rem = if h == 0.0 { Remainder::None } else { Remainder::Constant(h) };
    Ok(Kernel::Limiting(KernelSpec::new(dim, s, 1.0, rem)?))
}

/// d = 2, 64² cells on a box of width 8, 128 circle nodes, s = 1/4, b1 = 1, h = 0.1,
/// a Gaussian beam, dt = 0.02 up to t = 2, level sets at {0, ¼, ½}·max u(0).
pub fn default_run_setup() -> Result<Setup> {
    let dim = Dim::TWO;
    let spatial = SpatialGrid::new(dim, 8.0, 64)?;
    let angular = SphereQuadrature::circle(128)?;
    let u0 = make_initial(InitialKind::GaussianBeam, &InitialParams::default(), spatial, angular)?;
    let mut cfg = SolverConfig::new(limiting(dim, 0.25, 0.1)?, 0.02, 2.0, 63);
    cfg.diagnostics_every = 5;
    cfg.levels = vec![0.0, 0.25, 0.5];
    Ok(Setup { cfg, u0 })
}

/// Small d = 2 run for the Henyey–Greenstein ladder: 32² cells, 64 circle nodes, t_end = 1.
pub fn hg_setup() -> Result<Setup> {
    let dim = Dim::TWO;
    let spatial = SpatialGrid::new(dim, 8.0, 32)?;
    let angular = SphereQuadrature::circle(64)?;
    let u0 = make_initial(InitialKind::GaussianBeam, &InitialParams::default(), spatial, angular)?;
    let cfg = SolverConfig::new(limiting(dim, 0.25, 0.0)?, 0.05, 1.0, 31);
    Ok(Setup { cfg, u0 })
}

/// d = 2 decay configuration: box 18 ≥ 2(1 + t_end) with t_end = 8, an isotropic
/// blob of width 0.5 at the centre, 128² cells and 64 circle nodes.
pub fn decay_setup() -> Result<Setup> {
    let dim = Dim::TWO;
    let spatial = SpatialGrid::new(dim, 18.0, 128)?;
    let angular = SphereQuadrature::circle(64)?;
    let p = InitialParams { sigma: 0.5, ..Default::default() };
    let u0 = make_initial(InitialKind::IsotropicBlob, &p, spatial, angular)?;
    let mut cfg = SolverConfig::new(limiting(dim, 0.25, 0.0)?, 0.05, 8.0, 31);
    cfg.diagnostics_every = 10;
    Ok(Setup { cfg, u0 })
}

/// Smooth bump of radius 2 on the plane grid [−8, 8)^{d−1}
/// (1024 nodes for d = 2, 256 per axis for d = 3).
pub fn operator_bump(dim: Dim) -> Result<PlaneField> {
    let n = if dim.d() == 2 { 1024 } else { 256 };
    let grid = PlaneGrid::new(dim, 8.0, n)?;
    Ok(PlaneField::from_fn(grid, |v| bump(v, 2.0)))
}
