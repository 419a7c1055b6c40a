//! Two H^s seminorms of an angular field: the double integral
//! ∬ (u(θ′) − u(θ))²/|θ′ − θ|^{n+2s} and the projected ‖(−Δ)^{s/2} w_J‖²_{L²(R^n)}.

use super::eigs::{funk_hecke_eigs, EigenTable};
use super::harmonics::{AngularSpectrum, SphereFn};
use super::projected::ProjectedScatter;
use super::sphere::SphereQuadrature;
use super::weak::weak_pairing_limit;
use crate::error::Result;
use crate::geom::Dim;
use crate::kernels::{sobolev_constant, Constants, Kernel, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsNorms {
    pub double_integral: f64,
    pub projected: f64,
}

/// Both seminorms for a field of harmonic degree ≤ `band`. The double integral comes from the
/// extrapolated weak form; the projected one from the plane operator through
/// ‖(−Δ)^{s/2} w_J‖² = 2^{−n}(c_b‖u‖² − ⟨I_{b1}u, u⟩/D).
pub fn hs_norm(u: &dyn SphereFn, dim: Dim, s: f64, band: usize) -> Result<HsNorms> {
    let spec = KernelSpec::pure(dim, s, 1.0)?;
    let kernel = Kernel::Limiting(spec.clone());
    let a = spec.order();
    let w = weak_pairing_limit(u, u, &kernel, band)?;
    let double_integral = -(2f64.powf(1.0 - a)) * w.value;

    let c = Constants::of(&spec)?;
    let q = SphereQuadrature::for_dim(dim, if dim.d() == 2 { 2 * band + 2 } else { band + 1 })?;
    let vals = q.sample(&|t| u.eval(t));
    let iu = ProjectedScatter::new(kernel, band)?.apply_at(u, q.nodes())?;
    let projected = 2f64.powi(-(dim.n() as i32)) * (c.c_bessel * q.dot(&vals, &vals) - q.dot(&iu, &vals) / c.d);
    Ok(HsNorms { double_integral, projected })
}

/// Relative defect of D0·PS = 2^{n/2+s−1} b1 DI + D c_b ‖u‖² for a kernel spec.
pub fn hs_relation_defect(norms: &HsNorms, spec: &KernelSpec, l2_sq: f64) -> Result<f64> {
    let c = Constants::of(spec)?;
    let lhs = c.d0 * norms.projected;
    let rhs = 2f64.powf(spec.order() - 1.0) * spec.b1 * norms.double_integral + c.d * c.c_bessel * l2_sq;
    Ok((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE))
}

/// Mode multipliers μ_l with ‖(−Δ)^{s/2} w_J‖² = Σ μ_l |c_lm|², from the singular eigenvalues.
pub fn hs_multipliers(dim: Dim, s: f64, lmax: usize) -> Result<Vec<f64>> {
    let spec = KernelSpec::pure(dim, s, 1.0)?;
    let c = Constants::of(&spec)?;
    let eigs: EigenTable = funk_hecke_eigs(&Kernel::Limiting(spec), lmax)?;
    let k = 2f64.powi(-(dim.n() as i32));
    Ok(eigs.values().iter().map(|lam| k * (c.c_bessel - lam / c.d)).collect())
}

/// Projected seminorm of a band-limited field from its spectrum.
pub fn hs_spectral(f: &AngularSpectrum, multipliers: &[f64]) -> f64 {
    f.coeffs.iter().zip(f.basis.degrees()).map(|(c, &l)| multipliers[l] * c * c).sum()
}

/// Right side of the Sobolev bound PS ≥ S‖w_J‖²_{L^p}, p = 2n/(n − 2s), written on the sphere:
/// S·2^{−2n/p}(∫|u|^p dθ)^{2/p}.
pub fn sobolev_lower_bound(values: &[f64], quad: &SphereQuadrature, s: f64) -> f64 {
    let n = quad.dim().n() as f64;
    let p = 2.0 * n / (n - 2.0 * s);
    let lp: f64 = values.iter().zip(quad.weights()).map(|(u, w)| w * u.abs().powf(p)).sum();
    sobolev_constant(quad.dim().n(), s) * 2f64.powf(-2.0 * n / p) * lp.powf(2.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Direction;

    #[test]
    fn constant_field_seminorms() {
        let h = hs_norm(&|_: &Direction| 2.0, Dim::TWO, 0.25, 2).unwrap();
        assert!(h.double_integral.abs() < 1e-10);
        // the projected seminorm of a constant is c_b|S|u²/2^n, not zero: w_J is not constant
        let m = hs_multipliers(Dim::TWO, 0.25, 0).unwrap();
        assert!((h.projected - m[0] * 4.0 * 2.0 * std::f64::consts::PI).abs() < 1e-6 * h.projected);
    }

    #[test]
    fn relation_on_degree_one() {
        for (dim, s) in [(Dim::TWO, 0.25), (Dim::THREE, 0.5)] {
            let u = |t: &Direction| t.components()[0];
            let h = hs_norm(&u, dim, s, 1).unwrap();
            let q = SphereQuadrature::for_dim(dim, 4).unwrap();
            let v = q.sample(&u);
            let spec = KernelSpec::pure(dim, s, 1.7).unwrap();
            let defect = hs_relation_defect(&h, &spec, q.dot(&v, &v)).unwrap();
            assert!(defect < 1e-2, "{dim:?}: {defect}");
        }
    }

    #[test]
    fn constants_saturate_sobolev() {
        for (dim, s) in [(Dim::TWO, 0.25), (Dim::THREE, 0.5)] {
            let q = SphereQuadrature::for_dim(dim, 8).unwrap();
            let v = vec![1.0; q.len()];
            let m = hs_multipliers(dim, s, 0).unwrap();
            let ps = m[0] * dim.sphere_area();
            let lb = sobolev_lower_bound(&v, &q, s);
            assert!((ps - lb).abs() < 1e-10 * ps, "{ps} vs {lb}");
        }
    }
}
