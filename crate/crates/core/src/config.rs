//! Run and study configuration files.
//!
//! The format is TOML: `key = value` lines grouped in `[sections]`. Unknown keys
//! are rejected.
//!
//! ```toml
//! dimension = 2
//!
//! [kernel]
//! s = 0.25
//! b1 = 1.0
//! remainder = "constant"     # none | constant | polynomial
//! coefficients = [0.1]       # h = c0 or h(z) = c0 + c1 z + …
//! # g = 0.95                 # Henyey–Greenstein approximant instead of the limiting kernel
//!
//! [grid]
//! X = 8.0                    # spatial box width
//! m = 64                     # cells per spatial axis
//! angular = 128              # circle nodes (d = 2) or polar rings (d = 3)
//! lmax = 63
//! # L = 8.0                  # plane grid for the projected backend
//! # n = 8192
//!
//! [solver]
//! dt = 0.02
//! t_end = 2.0
//! backend = "spectral"       # spectral | projected
//! diagnostics_every = 5
//! snapshot_every = 0
//! levels = [0.0, 0.25, 0.5]
//!
//! [initial]
//! kind = "gaussian-beam"
//!
//! [study]
//! name = "hg-convergence"
//! ladder = [0.9, 0.95, 0.975, 0.99]
//! ```

use crate::error::{Error, Result};
use crate::experiments::bump;
use crate::fracop::{PlaneField, PlaneGrid};
use crate::geom::Dim;
use crate::kernels::{HGSpec, Kernel, KernelSpec, Remainder};
use crate::scatter::SphereQuadrature;
use crate::solver::{make_initial, Backend, InitialKind, InitialParams, PhaseField, SolverConfig, SpatialGrid};
use serde::Deserialize;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimension: usize,
    kernel: RawKernel,
    #[serde(default)]
    grid: RawGrid,
    solver: Option<RawSolver>,
    #[serde(default)]
    initial: RawInitial,
    study: Option<RawStudy>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    s: f64,
    #[serde(default = "one")]
    b1: f64,
    #[serde(default = "none")]
    remainder: String,
    #[serde(default)]
    coefficients: Vec<f64>,
    g: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn none() -> String {
    "none".into()
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(rename = "X")]
    x: Option<f64>,
    m: Option<usize>,
    angular: Option<usize>,
    lmax: Option<usize>,
    #[serde(rename = "L")]
    l: Option<f64>,
    n: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    dt: f64,
    t_end: f64,
    #[serde(default = "spectral")]
    backend: String,
    #[serde(default)]
    snapshot_every: usize,
    #[serde(default = "one_usize")]
    diagnostics_every: usize,
    #[serde(default)]
    levels: Vec<f64>,
}

fn spectral() -> String {
    "spectral".into()
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    #[serde(default = "beam")]
    kind: String,
    amplitude: Option<f64>,
    sigma: Option<f64>,
    center: Option<Vec<f64>>,
    direction: Option<Vec<f64>>,
    kappa: Option<f64>,
    perturbation: Option<f64>,
    degree: Option<usize>,
}

fn beam() -> String {
    "gaussian-beam".into()
}

impl Default for RawInitial {
    fn default() -> Self {
        RawInitial {
            kind: beam(),
            amplitude: None,
            sigma: None,
            center: None,
            direction: None,
            kappa: None,
            perturbation: None,
            degree: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    name: String,
    #[serde(default)]
    ladder: Vec<f64>,
    transient: Option<f64>,
    delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    HgConvergence,
    OperatorRate,
    Decay,
    LevelSet,
    RhoRegularity,
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<StudyKind> {
        match s {
            "hg-convergence" => Ok(StudyKind::HgConvergence),
            "operator-rate" => Ok(StudyKind::OperatorRate),
            "decay" => Ok(StudyKind::Decay),
            "level-set" => Ok(StudyKind::LevelSet),
            "rho-regularity" => Ok(StudyKind::RhoRegularity),
            other => Err(Error::Config(format!(
                "unknown study `{other}` (expected hg-convergence, operator-rate, decay, level-set or rho-regularity)"
            ))),
        }
    }
}

impl StudyKind {
    fn needs_ladder(self) -> bool {
        matches!(self, StudyKind::HgConvergence | StudyKind::OperatorRate | StudyKind::LevelSet)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub ladder: Vec<f64>,
    /// start of the fitting window for the decay study
    pub transient: f64,
    /// δ of the density regularity exponent
    pub delta: f64,
}

/// A validated configuration file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dim: Dim,
    pub kernel: Kernel,
    pub spatial: SpatialGrid,
    pub angular_size: usize,
    /// projected-backend plane grid when both `L` and `n` are given
    pub plane: Option<PlaneGrid>,
    pub solver: Option<SolverConfig>,
    pub initial_kind: InitialKind,
    pub initial: InitialParams,
    pub study: Option<StudyConfig>,
}

fn cfg_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn vec3(v: &[f64], what: &str, dim: Dim) -> Result<[f64; 3]> {
    if v.len() != dim.d() {
        return Err(Error::Config(format!("initial.{what} needs {} components", dim.d())));
    }
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(v);
    Ok(out)
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<RunConfig> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        build(raw).map_err(cfg_err)
    }
}

fn build(raw: RawConfig) -> Result<RunConfig> {
    let dim = Dim::new(raw.dimension)?;
    let k = &raw.kernel;
    let remainder = match k.remainder.as_str() {
        "none" => Remainder::None,
        "constant" => match k.coefficients.as_slice() {
            [c] => Remainder::Constant(*c),
            _ => return Err(Error::Config("remainder = \"constant\" needs exactly one coefficient".into())),
        },
        "polynomial" if !k.coefficients.is_empty() => Remainder::Polynomial(k.coefficients.clone()),
        "polynomial" => return Err(Error::Config("remainder = \"polynomial\" needs coefficients".into())),
        other => return Err(Error::Config(format!("unknown remainder `{other}` (expected none, constant or polynomial)"))),
    };
    if matches!(remainder, Remainder::None) && !k.coefficients.is_empty() {
        return Err(Error::Config("coefficients given without a remainder".into()));
    }
    let spec = KernelSpec::new(dim, k.s, k.b1, remainder)?;
    let kernel = match k.g {
        Some(g) => Kernel::HenyeyGreenstein(HGSpec::new(spec, g)?),
        None => Kernel::Limiting(spec),
    };
    let gr = &raw.grid;
    let spatial = SpatialGrid::new(dim, gr.x.unwrap_or(8.0), gr.m.unwrap_or(32))?;
    let angular_size = gr.angular.unwrap_or(if dim.d() == 2 { 64 } else { 12 });
    let quad = SphereQuadrature::for_dim(dim, angular_size)?;
    let lmax = gr.lmax.unwrap_or(if dim.d() == 2 { (angular_size - 1) / 2 } else { angular_size - 1 });
    let plane = match (gr.l, gr.n) {
        (Some(l), Some(n)) => Some(PlaneGrid::new(dim, l, n)?),
        (None, None) => None,
        _ => return Err(Error::Config("grid.L and grid.n must be given together".into())),
    };
    let solver = match &raw.solver {
        Some(s) => {
            let mut c = SolverConfig::new(kernel.clone(), s.dt, s.t_end, lmax);
            c.backend = match s.backend.as_str() {
                "spectral" => Backend::SphereSpectral,
                "projected" => Backend::ProjectedPlane,
                other => return Err(Error::Config(format!("unknown backend `{other}` (expected spectral or projected)"))),
            };
            c.snapshot_every = s.snapshot_every;
            c.diagnostics_every = s.diagnostics_every;
            c.levels = s.levels.clone();
            c.plane = plane;
            c.validate()?;
            if lmax > quad.max_band() {
                return Err(Error::Config(format!("lmax = {lmax} exceeds the band {} of the angular grid", quad.max_band())));
            }
            Some(c)
        }
        None => None,
    };
    let ini = &raw.initial;
    let initial_kind: InitialKind = ini.kind.parse()?;
    let d = InitialParams::default();
    let initial = InitialParams {
        amplitude: ini.amplitude.unwrap_or(d.amplitude),
        sigma: ini.sigma.unwrap_or(d.sigma),
        center: ini.center.as_deref().map(|c| vec3(c, "center", dim)).transpose()?.unwrap_or(d.center),
        direction: ini.direction.as_deref().map(|c| vec3(c, "direction", dim)).transpose()?.unwrap_or(d.direction),
        kappa: ini.kappa.unwrap_or(d.kappa),
        perturbation: ini.perturbation.unwrap_or(d.perturbation),
        degree: ini.degree.unwrap_or(d.degree),
    };
    let study = match &raw.study {
        Some(st) => {
            let kind: StudyKind = st.name.parse()?;
            if kind.needs_ladder() && st.ladder.len() < 3 {
                return Err(Error::Config(format!("study ladder needs at least 3 points, got {}", st.ladder.len())));
            }
            if kind != StudyKind::OperatorRate && raw.solver.is_none() {
                return Err(Error::Config(format!("study `{}` needs a [solver] section", st.name)));
            }
            Some(StudyConfig {
                kind,
                ladder: st.ladder.clone(),
                transient: st.transient.unwrap_or(1.0),
                delta: st.delta.unwrap_or(0.5),
            })
        }
        None => None,
    };
    Ok(RunConfig { dim, kernel, spatial, angular_size, plane, solver, initial_kind, initial, study })
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn angular(&self) -> Result<SphereQuadrature> {
        SphereQuadrature::for_dim(self.dim, self.angular_size)
    }

    pub fn initial_state(&self) -> Result<PhaseField> {
        make_initial(self.initial_kind, &self.initial, self.spatial, self.angular()?).map_err(cfg_err)
    }

    /// Solver settings, or a config error when the file has no [solver] section.
    pub fn solver_config(&self) -> Result<&SolverConfig> {
        self.solver.as_ref().ok_or_else(|| Error::Config("missing [solver] section".into()))
    }

    /// Band used for eigenvalue tables: grid.lmax, else the band of the angular grid.
    pub fn lmax(&self) -> Result<usize> {
        match &self.solver {
            Some(s) => Ok(s.lmax),
            None => Ok(self.angular()?.max_band()),
        }
    }

    /// Bump of radius L/4 on the plane grid (default L = 8 with 1024 or 256 nodes per axis).
    pub fn operator_field(&self) -> Result<PlaneField> {
        let grid = match self.plane {
            Some(g) => g,
            None => PlaneGrid::new(self.dim, 8.0, if self.dim.d() == 2 { 1024 } else { 256 })?,
        };
        let r = 0.25 * grid.half_width();
        Ok(PlaneField::from_fn(grid, |v| bump(v, r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "dimension = 2\n[kernel]\ns = 0.25\nb1 = 1.0\nremainder = \"constant\"\ncoefficients = [0.1]\n\
        [grid]\nX = 8.0\nm = 16\nangular = 32\n[solver]\ndt = 0.05\nt_end = 0.5\n";

    #[test]
    fn parses_full_config() {
        let c: RunConfig = BASE.parse().unwrap();
        assert_eq!(c.dim, Dim::TWO);
        assert_eq!(c.kernel.base().remainder, Remainder::Constant(0.1));
        let s = c.solver_config().unwrap();
        assert_eq!((s.lmax, s.steps()), (15, 10));
        assert_eq!(c.initial_state().unwrap().values.len(), 16 * 16 * 32);
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        let err = |t: &str| matches!(t.parse::<RunConfig>(), Err(Error::Config(_)));
        assert!(err(&BASE.replace("b1 = 1.0", "b1 = 1.0\nbogus = 3")));
        assert!(err(&BASE.replace("s = 0.25\n", "")));
        assert!(err(&BASE.replace("\"constant\"", "\"cubic\"")));
        assert!(err(&format!("{BASE}[study]\nname = \"nope\"\n")));
        assert!(err(&format!("{BASE}[study]\nname = \"hg-convergence\"\nladder = [0.9, 0.99]\n")));
        assert!(err(&BASE.replace("s = 0.25", "s = 1.5")));
        assert!(err(&BASE.replace("angular = 32", "angular = 32\nlmax = 40")));
    }

    #[test]
    fn study_block() {
        let c: RunConfig = format!("{BASE}[study]\nname = \"level-set\"\nladder = [0.0, 0.25, 0.5]\n").parse().unwrap();
        let st = c.study.unwrap();
        assert_eq!(st.kind, StudyKind::LevelSet);
        assert_eq!(st.ladder.len(), 3);
    }
}
