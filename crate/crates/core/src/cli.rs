//! Subcommand implementations behind the `prte` binary.

use crate::config::{RunConfig, StudyKind};
use crate::error::{Error, Result};
use crate::experiments::{
    decay_study, hg_convergence_study, level_set_study, operator_rate_study, rho_regularity_study, StudyReport,
};
use crate::scatter::funk_hecke_eigs;
use crate::solver::{run, write_diagnostics_file, write_snapshot, LevelSetRecord};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_STUDY: i32 = 5;

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::UnknownKind(_) | Error::ParameterOutOfRange(_) | Error::Io(_) => EXIT_CONFIG,
        Error::InvariantViolation(_) => EXIT_INVARIANT,
        Error::NonMonotoneConvergence(_) | Error::WindowTooShort(_) => EXIT_STUDY,
        Error::NorthPoleSingularity(_)
        | Error::SingularArgument(_)
        | Error::BoundaryLeakage { .. }
        | Error::QuadratureNonConvergence(_)
        | Error::StabilityViolation(_)
        | Error::NumericalFailure(_) => EXIT_NUMERICAL,
    }
}

/// Runs `f` on a pool of `threads` workers (the global pool when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write_level_sets(path: &Path, records: &[LevelSetRecord]) -> Result<()> {
    let mut s = String::from("time,fraction,lambda,norm_sq,residual\n");
    for r in records {
        let _ = writeln!(s, "{:e},{:e},{:e},{:e},{:e}", r.time, r.fraction, r.lambda, r.start_norm_sq, r.residual);
    }
    std::fs::write(path, s)?;
    Ok(())
}

/// Files written by `cmd_solve`.
#[derive(Debug, Clone)]
pub struct SolveArtifacts {
    pub diagnostics: PathBuf,
    pub level_sets: Option<PathBuf>,
    pub snapshots: Vec<PathBuf>,
}

/// Runs the solver and writes `diagnostics.csv`, `level_sets.csv` and `snapshots/`.
pub fn cmd_solve(config: &Path, out: &Path) -> Result<SolveArtifacts> {
    let rc = RunConfig::from_path(config)?;
    let cfg = rc.solver_config()?;
    let u0 = rc.initial_state()?;
    let result = run(cfg, &u0)?;
    std::fs::create_dir_all(out)?;
    let diagnostics = out.join("diagnostics.csv");
    write_diagnostics_file(&diagnostics, &result.diagnostics)?;
    let level_sets = if cfg.levels.is_empty() {
        None
    } else {
        let p = out.join("level_sets.csv");
        write_level_sets(&p, &result.level_sets)?;
        Some(p)
    };
    let mut snapshots = Vec::new();
    if !result.snapshots.is_empty() {
        let dir = out.join("snapshots");
        std::fs::create_dir_all(&dir)?;
        for (i, u) in result.snapshots.iter().enumerate() {
            let p = dir.join(format!("snapshot_{i:05}.bin"));
            write_snapshot(&p, u)?;
            snapshots.push(p);
        }
    }
    log::info!(
        "solve: {} steps, final mass {:e}, final L2 {:e}",
        cfg.steps(),
        result.final_state.mass(),
        result.final_state.l2()
    );
    Ok(SolveArtifacts { diagnostics, level_sets, snapshots })
}

/// Writes `eigs.csv` with columns `l,lambda` for l = 0..=lmax.
pub fn cmd_eigs(config: &Path, out: &Path) -> Result<PathBuf> {
    let rc = RunConfig::from_path(config)?;
    let table = funk_hecke_eigs(&rc.kernel, rc.lmax()?)?;
    let mut s = String::from("l,lambda\n");
    for (l, v) in table.values().iter().enumerate() {
        let _ = writeln!(s, "{l},{v}");
    }
    std::fs::create_dir_all(out)?;
    let p = out.join("eigs.csv");
    std::fs::write(&p, s)?;
    Ok(p)
}

/// Runs the configured study and writes its report. A failed study is returned
/// as `Ok` with `passed() == false`; the caller maps it to the study exit code.
pub fn cmd_study(config: &Path, out: &Path) -> Result<StudyReport> {
    let rc = RunConfig::from_path(config)?;
    let st = rc.study.clone().ok_or_else(|| Error::Config("missing [study] section".into()))?;
    let report = match st.kind {
        StudyKind::OperatorRate => operator_rate_study(&rc.operator_field()?, rc.kernel.base().s, &st.ladder)?,
        kind => {
            let cfg = rc.solver_config()?;
            let u0 = rc.initial_state()?;
            match kind {
                StudyKind::HgConvergence => hg_convergence_study(cfg, &u0, &st.ladder)?,
                StudyKind::Decay => decay_study(cfg, &u0, st.transient)?,
                StudyKind::LevelSet => level_set_study(cfg, &u0, &st.ladder)?,
                StudyKind::RhoRegularity => rho_regularity_study(cfg, &u0, st.delta)?,
                StudyKind::OperatorRate => unreachable!(),
            }
        }
    };
    report.write(out)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code(&Error::InvariantViolation("x".into())), EXIT_INVARIANT);
        assert_eq!(exit_code(&Error::StabilityViolation("x".into())), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::WindowTooShort(2)), EXIT_STUDY);
    }

    #[test]
    fn zero_threads_rejected() {
        assert!(with_threads(Some(0), || ()).is_err());
        assert_eq!(with_threads(Some(2), rayon::current_num_threads).unwrap(), 2);
    }
}
