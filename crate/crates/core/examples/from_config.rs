//! Drives the CLI subcommands from a TOML file, as `prte` does.
//!
//! cargo run --release --example from_config -- configs/hg_convergence.toml [out-dir]
use prte::cli::{cmd_eigs, cmd_solve, cmd_study};
use prte::config::RunConfig;
use std::path::PathBuf;

fn main() -> prte::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(args.next().unwrap_or_else(|| format!("{}/configs/beam.toml", env!("CARGO_MANIFEST_DIR"))));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let rc = RunConfig::from_path(&config)?;
    println!("d = {}, kernel {:?}", rc.dim.d(), rc.kernel.base());
    println!("wrote {}", cmd_eigs(&config, &out)?.display());
    if rc.study.is_some() {
        print!("{}", cmd_study(&config, &out)?.summary());
    } else {
        let a = cmd_solve(&config, &out)?;
        println!("wrote {} and {} snapshots", a.diagnostics.display(), a.snapshots.len());
    }
    Ok(())
}
