//! Convergence, rate and decay studies with tabular reports.

mod presets;
mod report;
mod rho;
mod studies;

pub use presets::{decay_setup, default_run_setup, hg_setup, operator_bump, Setup};
pub use report::{fit_power_law, parse_csv, read_report_csv, Check, Fit, StudyReport};
pub use rho::{regularity_exponent, rho, rho_regularity, sobolev_norm_sq, RhoRegularity};
pub use studies::{
    bump, decay_study, hg_convergence_study, level_set_energy_check, level_set_study, operator_rate_study,
    rho_regularity_study, DECAY_MIN_EXPONENT, LEVEL_SET_TOL, MEE_MATCH_TOL,
};
