//! The scattering substep as a linear map on angular node values, shared by every spatial node.

use super::field::PhaseField;
use crate::error::{Error, Result};
use crate::fracop::PlaneGrid;
use crate::kernels::Kernel;
use crate::quad::gauss_legendre;
use crate::scatter::{funk_hecke_eigs, hs_multipliers, EigenTable, ProjectedScatter, SphereQuadrature, SphereTransform};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// exact exponential of the Funk–Hecke diagonal
    SphereSpectral,
    /// classical RK4 on the stereographic-plane operator
    ProjectedPlane,
}

/// RK4 is stable on the negative real axis down to −2.785.
const RK4_REAL_STABILITY: f64 = 2.785;

/// Linear propagators P(τ) for the scattering substep plus the data for its energy integrals.
#[derive(Debug, Clone)]
pub struct Propagator {
    backend: Backend,
    dt: f64,
    step: DMatrix<f64>,
    /// (Gauss weight × dt, P(τ_q)) on four Gauss–Legendre nodes in [0, dt]
    stages: Vec<(f64, DMatrix<f64>)>,
    analysis: DMatrix<f64>,
    mu: Vec<f64>,
    weights: Vec<f64>,
    eigs: EigenTable,
    spectral_radius: Option<f64>,
}

/// ∫ ‖v‖² and ∫ ‖(−Δ)^{s/2} w_J‖² over one substep, summed over x.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SubstepIntegrals {
    pub l2: f64,
    pub hs: f64,
}

impl Propagator {
    /// `plane` overrides the projected backend's default plane grid.
    pub fn new(
        kernel: &Kernel,
        quad: &SphereQuadrature,
        lmax: usize,
        backend: Backend,
        dt: f64,
        plane: Option<PlaneGrid>,
    ) -> Result<Propagator> {
        let tr = SphereTransform::new(quad.clone(), lmax)?;
        let nq = quad.len();
        let k = tr.basis().len();
        let synth = DMatrix::from_fn(nq, k, |i, j| tr.row(i)[j]);
        let analysis = DMatrix::from_fn(k, nq, |j, i| tr.row(i)[j] * quad.weights()[i]);
        let eigs = funk_hecke_eigs(kernel, lmax)?;
        let degrees = tr.basis().degrees().to_vec();
        let mu_l = hs_multipliers(kernel.dim(), kernel.base().s, lmax)?;
        let mu = degrees.iter().map(|&l| mu_l[l]).collect();
        let gl = gauss_legendre(4);
        let taus: Vec<(f64, f64)> = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| (0.5 * dt * (1.0 + x), 0.5 * dt * w)).collect();
        let (step, stages, spectral_radius) = match backend {
            Backend::SphereSpectral => {
                let prop = |tau: f64| {
                    let diag = DVector::from_iterator(k, degrees.iter().map(|&l| (eigs.get(l) * tau).exp()));
                    &synth * DMatrix::from_diagonal(&diag) * &analysis
                };
                (prop(dt), taus.iter().map(|&(t, w)| (w, prop(t))).collect(), None)
            }
            Backend::ProjectedPlane => {
                let op = match plane {
                    Some(g) => ProjectedScatter::with_grid(kernel.clone(), g, lmax)?,
                    None => ProjectedScatter::new(kernel.clone(), lmax)?,
                };
                let m = op.node_matrix(&tr)? * &analysis;
                let rho = spectral_radius(&m);
                let bound = RK4_REAL_STABILITY / rho.max(f64::MIN_POSITIVE);
                if dt > bound {
                    return Err(Error::StabilityViolation(format!(
                        "dt = {dt} exceeds the RK4 bound {bound:.4e} (spectral radius {rho:.4e})"
                    )));
                }
                let rk4 = |tau: f64| {
                    let z = &m * tau;
                    let mut term = DMatrix::identity(nq, nq);
                    let mut acc = term.clone();
                    for p in 1..=4 {
                        term = &term * &z / p as f64;
                        acc += &term;
                    }
                    acc
                };
                (rk4(dt), taus.iter().map(|&(t, w)| (w, rk4(t))).collect(), Some(rho))
            }
        };
        Ok(Propagator {
            backend,
            dt,
            step,
            stages,
            analysis,
            mu,
            weights: quad.weights().to_vec(),
            eigs,
            spectral_radius,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn eigs(&self) -> &EigenTable {
        &self.eigs
    }

    /// Power-iteration estimate of the projected operator's spectral radius.
    pub fn spectral_radius(&self) -> Option<f64> {
        self.spectral_radius
    }

    /// Largest stable dt for the projected backend.
    pub fn dt_bound(&self) -> Option<f64> {
        self.spectral_radius.map(|r| RK4_REAL_STABILITY / r)
    }

    fn as_matrix(u: &PhaseField) -> DMatrix<f64> {
        DMatrix::from_column_slice(u.angular.len(), u.spatial.len(), &u.values)
    }

    /// u ← P(dt) u.
    pub fn apply(&self, u: &mut PhaseField) {
        let out = &self.step * Self::as_matrix(u);
        u.values.copy_from_slice(out.as_slice());
    }

    /// Substep integrals of ‖u‖² and the projected seminorm for u itself (`None`) and each
    /// level-set truncation (u − λ)₊.
    pub fn integrals(&self, u: &PhaseField, levels: &[Option<f64>]) -> Vec<SubstepIntegrals> {
        let um = Self::as_matrix(u);
        let cell = u.spatial.cell();
        let mut out = vec![SubstepIntegrals::default(); levels.len()];
        for (w, p) in &self.stages {
            let v = p * &um;
            for (acc, level) in out.iter_mut().zip(levels) {
                let trunc = match level {
                    None => v.clone(),
                    Some(lam) => v.map(|x| (x - lam).max(0.0)),
                };
                let c = &self.analysis * &trunc;
                let mut l2 = 0.0;
                for col in trunc.column_iter() {
                    l2 += col.iter().zip(&self.weights).map(|(x, w)| w * x * x).sum::<f64>();
                }
                let mut hs = 0.0;
                for col in c.column_iter() {
                    hs += col.iter().zip(&self.mu).map(|(x, m)| m * x * x).sum::<f64>();
                }
                acc.l2 += w * l2 * cell;
                acc.hs += w * hs * cell;
            }
        }
        out
    }
}

fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    // deterministic start with content in every mode
    let mut v = DVector::from_fn(n, |i, _| 1.0 + ((i * 7919) % 97) as f64 / 97.0);
    let mut rho = 0.0;
    for _ in 0..500 {
        let w = m * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        rho = norm / v.norm();
        v = w / norm;
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Dim;
    use crate::kernels::KernelSpec;
    use crate::solver::SpatialGrid;

    #[test]
    fn spectral_mode_decays_exactly() {
        let k = Kernel::Limiting(KernelSpec::pure(Dim::TWO, 0.25, 1.0).unwrap());
        let q = SphereQuadrature::circle(16).unwrap();
        let p = Propagator::new(&k, &q, 7, Backend::SphereSpectral, 0.05, None).unwrap();
        let g = SpatialGrid::new(Dim::TWO, 2.0, 4).unwrap();
        let mut u = PhaseField::from_fn(g, q, |_, t| 1.0 + 0.5 * (3.0 * t.components()[1].atan2(t.components()[0])).cos()).unwrap();
        let before = u.clone();
        p.apply(&mut u);
        let f = (p.eigs().get(3) * 0.05).exp();
        for (a, b) in u.values.iter().zip(&before.values) {
            assert!((a - (1.0 + (b - 1.0) * f)).abs() < 1e-13);
        }
        assert!((u.mass() - before.mass()).abs() < 1e-12 * before.mass());
    }
}
