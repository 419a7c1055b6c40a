//! Runs one named study on its preset and prints the report.
//!
//! cargo run --release --example studies -- hg-convergence|operator-rate|decay|level-set|rho-regularity [d]
use prte::config::StudyKind;
use prte::experiments::*;
use prte::geom::Dim;

fn main() -> prte::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: StudyKind = args.next().unwrap_or_else(|| "hg-convergence".into()).parse()?;
    let ladder = [0.9, 0.95, 0.975, 0.99];
    let report = match kind {
        StudyKind::OperatorRate => {
            let dim = Dim::new(args.next().map_or(Ok(2), |a| a.parse()).unwrap_or(2))?;
            let s = if dim.d() == 2 { 0.25 } else { 0.5 };
            operator_rate_study(&operator_bump(dim)?, s, &ladder)?
        }
        StudyKind::HgConvergence => {
            let st = hg_setup()?;
            hg_convergence_study(&st.cfg, &st.u0, &ladder)?
        }
        StudyKind::Decay => {
            let st = decay_setup()?;
            decay_study(&st.cfg, &st.u0, 1.0)?
        }
        StudyKind::LevelSet => {
            let st = default_run_setup()?;
            level_set_study(&st.cfg, &st.u0, &[0.0, 0.25, 0.5])?
        }
        StudyKind::RhoRegularity => {
            let st = hg_setup()?;
            rho_regularity_study(&st.cfg, &st.u0, 0.5)?
        }
    };
    print!("{}", report.summary());
    print!("{}", report.csv());
    Ok(())
}
