use clap::{Parser, Subcommand};
use prte::cli::{cmd_eigs, cmd_solve, cmd_study, exit_code, with_threads, EXIT_OK, EXIT_STUDY};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "prte", version, about = "Forward-peaked radiative transfer solver and studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// configuration file (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory
    #[arg(long, global = true, env = "PRTE_OUT", default_value = "out")]
    out: PathBuf,
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// run the solver; writes diagnostics.csv, level_sets.csv and snapshots/
    Solve,
    /// write the Funk–Hecke eigenvalues of the configured kernel to eigs.csv
    Eigs,
    /// run the configured study; writes <name>.report.csv and <name>.report.txt
    Study,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let Some(config) = cli.config.clone() else {
        eprintln!("error: --config <path> is required");
        return ExitCode::from(2);
    };
    let out = cli.out.clone();
    let outcome = with_threads(cli.threads, move || match cli.command {
        Command::Solve => cmd_solve(&config, &out).map(|a| {
            println!("wrote {}", a.diagnostics.display());
            EXIT_OK
        }),
        Command::Eigs => cmd_eigs(&config, &out).map(|p| {
            println!("wrote {}", p.display());
            EXIT_OK
        }),
        Command::Study => cmd_study(&config, &out).map(|r| {
            print!("{}", r.summary());
            if r.passed() { EXIT_OK } else { EXIT_STUDY }
        }),
    })
    .and_then(|r| r);
    let code = match outcome {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
