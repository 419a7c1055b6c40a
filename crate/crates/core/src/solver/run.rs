use super::field::PhaseField;
use super::propagator::{Backend, Propagator, SubstepIntegrals};
use super::transport::Transport;
use crate::error::{out_of_range, Error, Result};
use crate::fracop::PlaneGrid;
use crate::kernels::{Constants, Kernel};
use std::io::Write;
use std::path::Path;

/// Relative mass drift tolerated over a run.
pub const MASS_TOL: f64 = 1e-8;
/// Relative L² growth tolerated per step.
pub const L2_STEP_TOL: f64 = 1e-10;
/// Per-step L² growth beyond which the projected backend is declared unstable.
pub const STABILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub kernel: Kernel,
    pub dt: f64,
    pub t_end: f64,
    pub backend: Backend,
    /// angular band; at most the band resolved by the angular quadrature
    pub lmax: usize,
    /// 0 disables snapshots
    pub snapshot_every: usize,
    pub diagnostics_every: usize,
    /// level-set thresholds as fractions of max u(0)
    pub levels: Vec<f64>,
    /// plane grid for the projected backend (default grid if `None`)
    pub plane: Option<PlaneGrid>,
}

impl SolverConfig {
    pub fn new(kernel: Kernel, dt: f64, t_end: f64, lmax: usize) -> SolverConfig {
        SolverConfig {
            kernel,
            dt,
            t_end,
            backend: Backend::SphereSpectral,
            lmax,
            snapshot_every: 0,
            diagnostics_every: 1,
            levels: Vec::new(),
            plane: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(out_of_range(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt) {
            return Err(out_of_range(format!("t_end = {} is shorter than dt = {}", self.t_end, self.dt)));
        }
        if self.diagnostics_every == 0 {
            return Err(out_of_range("diagnostics cadence must be ≥ 1"));
        }
        if self.levels.iter().any(|l| !(0.0..1.0).contains(l)) {
            return Err(out_of_range("level fractions must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub mass: f64,
    pub l2: f64,
    pub linf: f64,
    /// accumulated ∫∫ ‖(−Δ)^{s/2} w_J‖² dx dt
    pub hs_integral: f64,
    /// ½‖u(t′)‖² + D1∫‖u‖² − ½‖u(t)‖² − D0∫∫‖·‖²_{H^s} since the previous record
    pub energy_residual: f64,
    pub min: f64,
}

pub const DIAGNOSTICS_HEADER: &str = "time,mass,l2,linf,hs_integral,energy_residual";

pub fn write_diagnostics(w: &mut dyn Write, records: &[DiagnosticsRecord]) -> Result<()> {
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for r in records {
        writeln!(w, "{:e},{:e},{:e},{:e},{:e},{:e}", r.time, r.mass, r.l2, r.linf, r.hs_integral, r.energy_residual)?;
    }
    Ok(())
}

pub fn write_diagnostics_file(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_diagnostics(&mut f, records)?;
    f.flush()?;
    Ok(())
}

/// Level-set energy balance on one diagnostics interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSetRecord {
    pub time: f64,
    pub fraction: f64,
    pub lambda: f64,
    /// ‖u_λ(t′)‖² at the start of the interval
    pub start_norm_sq: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<PhaseField>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub level_sets: Vec<LevelSetRecord>,
    /// (time, ‖u‖₂) after every step
    pub l2_steps: Vec<(f64, f64)>,
    /// (time, ‖u‖_∞) after every step
    pub linf_steps: Vec<(f64, f64)>,
    pub final_state: PhaseField,
}

/// Strang splitting driver for one configuration and one pair of grids.
#[derive(Debug, Clone)]
pub struct Solver {
    cfg: SolverConfig,
    transport: Transport,
    prop: Propagator,
}

impl Solver {
    pub fn new(cfg: SolverConfig, u0: &PhaseField) -> Result<Solver> {
        cfg.validate()?;
        if cfg.kernel.dim() != u0.spatial.dim() {
            return Err(out_of_range("kernel and field dimensions differ"));
        }
        let prop = Propagator::new(&cfg.kernel, &u0.angular, cfg.lmax, cfg.backend, cfg.dt, cfg.plane)?;
        Ok(Solver { transport: Transport::new(&u0.spatial), prop, cfg })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn propagator(&self) -> &Propagator {
        &self.prop
    }

    /// transport(dt/2) ∘ scattering(dt) ∘ transport(dt/2); returns the substep integrals.
    pub fn step(&self, u: &mut PhaseField, levels: &[Option<f64>]) -> Vec<SubstepIntegrals> {
        let dt = self.cfg.dt;
        self.transport.apply(u, 0.5 * dt);
        let ints = if levels.is_empty() { Vec::new() } else { self.prop.integrals(u, levels) };
        self.prop.apply(u);
        self.transport.apply(u, 0.5 * dt);
        u.time += dt;
        ints
    }

    pub fn scatter_only(&self, u: &mut PhaseField) {
        self.prop.apply(u);
        u.time += self.cfg.dt;
    }

    pub fn run(&self, u0: &PhaseField) -> Result<RunOutput> {
        let cfg = &self.cfg;
        if u0.min() < 0.0 {
            return Err(Error::InvariantViolation(format!("initial data has negative values (min {:e})", u0.min())));
        }
        let consts = Constants::of(cfg.kernel.base())?;
        let max0 = u0.max();
        let mut levels: Vec<Option<f64>> = vec![None];
        levels.extend(cfg.levels.iter().map(|f| Some(f * max0)));
        let norm_sq = |u: &PhaseField, level: Option<f64>| match level {
            None => u.l2_sq(),
            Some(lam) => {
                let w = u.angular.weights();
                let n = u.angular.len();
                u.values.iter().enumerate().map(|(i, x)| w[i % n] * (x - lam).max(0.0).powi(2)).sum::<f64>() * u.spatial.cell()
            }
        };
        let mut u = u0.clone();
        u.time = 0.0;
        let mass0 = u.mass();
        let record = |u: &PhaseField, hs: f64, res: f64| DiagnosticsRecord {
            time: u.time,
            mass: u.mass(),
            l2: u.l2(),
            linf: u.linf(),
            hs_integral: hs,
            energy_residual: res,
            min: u.min(),
        };
        let mut diagnostics = vec![record(&u, 0.0, 0.0)];
        let mut level_sets = Vec::new();
        let mut snapshots = Vec::new();
        if cfg.snapshot_every > 0 {
            snapshots.push(u.clone());
        }
        let mut start: Vec<f64> = levels.iter().map(|&l| norm_sq(&u, l)).collect();
        let mut acc = vec![SubstepIntegrals::default(); levels.len()];
        let mut hs_total = 0.0;
        let mut l2_prev = u.l2();
        let mut l2_steps = Vec::new();
        let mut linf_steps = Vec::new();
        let steps = cfg.steps();
        for step in 1..=steps {
            let ints = self.step(&mut u, &levels);
            for (a, i) in acc.iter_mut().zip(&ints) {
                a.l2 += i.l2;
                a.hs += i.hs;
            }
            hs_total += ints[0].hs;
            if u.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericalFailure(format!("non-finite values at t = {}", u.time)));
            }
            let mass = u.mass();
            if (mass - mass0).abs() > MASS_TOL * mass0.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::InvariantViolation(format!("mass drift {:e} at t = {}", (mass - mass0) / mass0, u.time)));
            }
            let l2 = u.l2();
            if cfg.backend == Backend::ProjectedPlane && l2 > l2_prev * (1.0 + STABILITY_TOL) {
                return Err(Error::StabilityViolation(format!("L² grew by {:e} at t = {}", l2 / l2_prev - 1.0, u.time)));
            }
            if l2 > l2_prev * (1.0 + L2_STEP_TOL) {
                return Err(Error::InvariantViolation(format!("L² grew by {:e} at t = {}", l2 / l2_prev - 1.0, u.time)));
            }
            l2_prev = l2;
            l2_steps.push((u.time, l2));
            linf_steps.push((u.time, u.linf()));
            if step % cfg.diagnostics_every == 0 || step == steps {
                let end: Vec<f64> = levels.iter().map(|&l| norm_sq(&u, l)).collect();
                let residual = |i: usize| 0.5 * start[i] + consts.d1 * acc[i].l2 - 0.5 * end[i] - consts.d0 * acc[i].hs;
                diagnostics.push(record(&u, hs_total, residual(0)));
                for (i, l) in levels.iter().enumerate().skip(1) {
                    level_sets.push(LevelSetRecord {
                        time: u.time,
                        fraction: cfg.levels[i - 1],
                        lambda: l.unwrap(),
                        start_norm_sq: start[i],
                        residual: residual(i),
                    });
                }
                start = end;
                acc = vec![SubstepIntegrals::default(); levels.len()];
            }
            if cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 {
                snapshots.push(u.clone());
            }
        }
        Ok(RunOutput { snapshots, diagnostics, level_sets, l2_steps, linf_steps, final_state: u })
    }
}

/// Convenience wrapper: one Strang step.
pub fn strang_step(u: &PhaseField, cfg: &SolverConfig) -> Result<PhaseField> {
    let solver = Solver::new(cfg.clone(), u)?;
    let mut out = u.clone();
    solver.step(&mut out, &[]);
    Ok(out)
}

/// Convenience wrapper: one scattering substep of length cfg.dt.
pub fn scattering_step(u: &PhaseField, cfg: &SolverConfig) -> Result<PhaseField> {
    let solver = Solver::new(cfg.clone(), u)?;
    let mut out = u.clone();
    solver.scatter_only(&mut out);
    Ok(out)
}

pub fn run(cfg: &SolverConfig, u0: &PhaseField) -> Result<RunOutput> {
    Solver::new(cfg.clone(), u0)?.run(u0)
}
