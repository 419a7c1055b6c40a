use super::field::{PhaseField, SpatialGrid};
use crate::error::{Error, Result};
use crate::geom::{Dim, Direction};
use crate::scatter::{zonal_table, SphereQuadrature};
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    /// G(x) · exp(κ(θ·e − 1))
    GaussianBeam,
    /// G(x)
    IsotropicBlob,
    /// G(x) · (1 + a G_l(θ·e)), |a| ≤ 1
    HarmonicPerturbation,
}

impl FromStr for InitialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<InitialKind> {
        match s {
            "gaussian-beam" => Ok(InitialKind::GaussianBeam),
            "isotropic-blob" => Ok(InitialKind::IsotropicBlob),
            "harmonic-perturbation" => Ok(InitialKind::HarmonicPerturbation),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

impl InitialKind {
    pub fn name(self) -> &'static str {
        match self {
            InitialKind::GaussianBeam => "gaussian-beam",
            InitialKind::IsotropicBlob => "isotropic-blob",
            InitialKind::HarmonicPerturbation => "harmonic-perturbation",
        }
    }
}

/// G(x) = amplitude · exp(−|x − center|²/(2σ²)).
#[derive(Debug, Clone, PartialEq)]
pub struct InitialParams {
    pub amplitude: f64,
    pub sigma: f64,
    pub center: [f64; 3],
    /// beam axis e (normalized on use)
    pub direction: [f64; 3],
    pub kappa: f64,
    /// harmonic weight a; the field is nonnegative only for |a| ≤ 1
    pub perturbation: f64,
    pub degree: usize,
}

impl Default for InitialParams {
    fn default() -> Self {
        InitialParams {
            amplitude: 1.0,
            sigma: 0.4,
            center: [0.0; 3],
            direction: [1.0, 0.0, 0.0],
            kappa: 4.0,
            perturbation: 0.5,
            degree: 1,
        }
    }
}

fn axis(dim: Dim, p: &InitialParams) -> Result<Direction> {
    Direction::new(dim, &p.direction[..dim.d()])
}

/// Modified Bessel function I_0 by its power series.
fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// ∫_{R^d} ∫ u0 dθ dx in closed form.
pub fn initial_mass(kind: InitialKind, p: &InitialParams, dim: Dim) -> f64 {
    let d = dim.d() as f64;
    let spatial = p.amplitude * (2.0 * PI * p.sigma * p.sigma).powf(d / 2.0);
    let angular = match kind {
        InitialKind::IsotropicBlob | InitialKind::HarmonicPerturbation => dim.sphere_area(),
        InitialKind::GaussianBeam => {
            let k = p.kappa;
            if k == 0.0 {
                dim.sphere_area()
            } else if dim.d() == 2 {
                2.0 * PI * bessel_i0(k) * (-k).exp()
            } else {
                2.0 * PI * (-(-2.0 * k).exp_m1()) / k
            }
        }
    };
    spatial * angular
}

pub fn make_initial(kind: InitialKind, p: &InitialParams, spatial: SpatialGrid, angular: SphereQuadrature) -> Result<PhaseField> {
    let dim = spatial.dim();
    if !(p.sigma > 0.0 && p.amplitude >= 0.0) {
        return Err(Error::ParameterOutOfRange("initial data needs σ > 0 and amplitude ≥ 0".into()));
    }
    if kind == InitialKind::GaussianBeam && p.kappa < 0.0 {
        return Err(Error::ParameterOutOfRange("beam concentration κ must be ≥ 0".into()));
    }
    let e = axis(dim, p)?;
    let d = dim.d();
    let box_half = 0.5 * spatial.box_size();
    let g = |x: &[f64]| {
        // nearest periodic image of the center
        let r2: f64 = (0..d)
            .map(|i| {
                let mut dx = x[i] - p.center[i];
                dx -= 2.0 * box_half * (dx / (2.0 * box_half)).round();
                dx * dx
            })
            .sum();
        p.amplitude * (-0.5 * r2 / (p.sigma * p.sigma)).exp()
    };
    PhaseField::from_fn(spatial, angular, |x, t| {
        let gx = g(x);
        match kind {
            InitialKind::IsotropicBlob => gx,
            InitialKind::GaussianBeam => gx * (p.kappa * (t.dot(&e) - 1.0)).exp(),
            InitialKind::HarmonicPerturbation => {
                let (gl, _) = zonal_table(dim, p.degree, t.dot(&e));
                gx * (1.0 + p.perturbation * gl[p.degree])
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blob_mass_matches_closed_form() {
        for dim in [Dim::TWO, Dim::THREE] {
            let g = SpatialGrid::new(dim, 6.0, 32).unwrap();
            let q = SphereQuadrature::for_dim(dim, 8).unwrap();
            let p = InitialParams::default();
            let u = make_initial(InitialKind::IsotropicBlob, &p, g, q.clone()).unwrap();
            let want = initial_mass(InitialKind::IsotropicBlob, &p, dim);
            assert!((u.mass() - want).abs() < 1e-10 * want, "{dim:?}");
            let b = make_initial(InitialKind::GaussianBeam, &p, g, SphereQuadrature::for_dim(dim, 48).unwrap()).unwrap();
            let want = initial_mass(InitialKind::GaussianBeam, &p, dim);
            assert!((b.mass() - want).abs() < 1e-10 * want, "{dim:?} beam {} {want}", b.mass());
            assert!(b.min() >= 0.0);
        }
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!("laser".parse::<InitialKind>(), Err(Error::UnknownKind(_))));
    }

    #[test]
    fn perturbation_nonnegative() {
        let g = SpatialGrid::new(Dim::THREE, 6.0, 8).unwrap();
        let q = SphereQuadrature::gauss(6).unwrap();
        let p = InitialParams { perturbation: 1.0, degree: 3, ..Default::default() };
        let u = make_initial(InitialKind::HarmonicPerturbation, &p, g, q).unwrap();
        assert!(u.min() >= 0.0);
        let p = InitialParams { perturbation: 3.0, ..p };
        let u = make_initial(InitialKind::HarmonicPerturbation, &p, u.spatial, u.angular).unwrap();
        assert!(u.min() < 0.0);
    }
}
