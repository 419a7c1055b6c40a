//! A full Strang-split run on the default configuration with its diagnostics.
use prte::experiments::default_run_setup;
use prte::solver::run;

fn main() -> prte::error::Result<()> {
    let setup = default_run_setup()?;
    let out = run(&setup.cfg, &setup.u0)?;
    println!("{:>6} {:>14} {:>12} {:>12} {:>14}", "t", "mass", "L2", "Linf", "MEE2 slack");
    for r in &out.diagnostics {
        println!("{:>6.2} {:>14.10} {:>12.8} {:>12.8} {:>14.4e}", r.time, r.mass, r.l2, r.linf, r.energy_residual);
    }
    for ls in out.level_sets.iter().filter(|r| r.time == out.final_state.time) {
        println!("level {:.2} (λ = {:.4}): residual {:.3e}", ls.fraction, ls.lambda, ls.residual);
    }
    Ok(())
}
