//! Funk–Hecke eigenvalues λ_l = |S^{d−2}| ∫ (G_l(t) − 1) b(t) (1 − t²)^{(d−3)/2} dt of the
//! collision operator, G_l the Chebyshev (d = 2) or Legendre (d = 3) polynomial.

use super::harmonics::AngularSpectrum;
use crate::error::{Error, Result};
use crate::geom::Dim;
use crate::kernels::{Kernel, KernelSpec};
use crate::quad::{composite, gauss_jacobi, graded_breakpoints};
use std::f64::consts::PI;

/// G_l(t) and q_l(t) = (1 − G_l(t))/(1 − t) for l = 0..=lmax, without cancellation near t = 1.
pub fn zonal_table(dim: Dim, lmax: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let mut g = vec![1.0; lmax + 1];
    let mut q = vec![0.0; lmax + 1];
    if lmax >= 1 {
        g[1] = t;
        q[1] = 1.0;
    }
    for l in 2..=lmax {
        let lf = l as f64;
        if dim.d() == 2 {
            g[l] = 2.0 * t * g[l - 1] - g[l - 2];
            q[l] = 2.0 * q[l - 1] - q[l - 2] + 2.0 * g[l - 1];
        } else {
            g[l] = ((2.0 * lf - 1.0) * t * g[l - 1] - (lf - 1.0) * g[l - 2]) / lf;
            q[l] = ((2.0 * lf - 1.0) * (q[l - 1] + g[l - 1]) - (lf - 1.0) * q[l - 2]) / lf;
        }
    }
    (g, q)
}

/// Eigenvalues of the collision operator on degree-l harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTable {
    dim: Dim,
    lambdas: Vec<f64>,
}

impl EigenTable {
    pub fn from_values(dim: Dim, lambdas: Vec<f64>) -> EigenTable {
        EigenTable { dim, lambdas }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn lmax(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn get(&self, l: usize) -> f64 {
        self.lambdas[l]
    }

    pub fn values(&self) -> &[f64] {
        &self.lambdas
    }

    /// λ_l nonincreasing in l.
    pub fn is_monotone(&self) -> bool {
        self.lambdas.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0))
    }

    /// Most negative eigenvalue.
    pub fn min(&self) -> f64 {
        self.lambdas.iter().cloned().fold(0.0, f64::min)
    }

    pub fn apply(&self, f: &AngularSpectrum) -> Result<AngularSpectrum> {
        apply_scatter_spectral(f, self)
    }
}

fn sphere_minus_one(dim: Dim) -> f64 {
    if dim.d() == 2 { 2.0 } else { 2.0 * PI }
}

/// ∫ q_l(t)(1 − t)^{−s}(1 + t)^{(n−2)/2} dt by Gauss–Jacobi with `m` nodes.
fn singular_moments(dim: Dim, s: f64, lmax: usize, m: usize) -> Result<Vec<f64>> {
    let beta = (dim.n() as f64 - 2.0) / 2.0;
    let rule = gauss_jacobi(m, -s, beta)?;
    let mut acc = vec![0.0; lmax + 1];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (_, q) = zonal_table(dim, lmax, t);
        for (a, ql) in acc.iter_mut().zip(&q) {
            *a += w * ql;
        }
    }
    Ok(acc)
}

/// b1 part: λ_l = −|S^{d−2}| b1 ∫ q_l (1 − t)^{−s}(1 + t)^{(n−2)/2} dt.
fn singular_eigs(spec: &KernelSpec, lmax: usize) -> Result<Vec<f64>> {
    let m = lmax / 2 + 8;
    let a = singular_moments(spec.dim, spec.s, lmax, m)?;
    let b = singular_moments(spec.dim, spec.s, lmax, m + 8)?;
    for l in 0..=lmax {
        if (a[l] - b[l]).abs() > 1e-10 * b[l].abs().max(1.0) {
            return Err(Error::QuadratureNonConvergence(format!("singular eigenvalue l = {l}")));
        }
    }
    let k = -sphere_minus_one(spec.dim) * spec.b1;
    Ok(b.iter().map(|x| k * x).collect())
}

/// Regular part ∫ (G_l − 1) f(t) over the sphere, f bounded but possibly peaked at t = 1 on the
/// length `width` (in ψ for d = 2, in 1 − t for d = 3).
fn regular_eigs(dim: Dim, f: &dyn Fn(f64) -> f64, width: f64, lmax: usize, order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; lmax + 1];
    let (hi, max_w) = if dim.d() == 2 {
        (PI, (0.2f64).min(2.0 / (lmax as f64 + 1.0)))
    } else {
        (2.0, (0.1f64).min(2.0 / (lmax as f64 + 1.0)))
    };
    let smallest = (0.05 * width).min(max_w);
    let mut breaks = vec![0.0];
    breaks.extend(graded_breakpoints(smallest, hi, smallest, 1.5, max_w));
    breaks.dedup();
    let rule = composite(&breaks, order);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        // u = 1 − t computed without cancellation
        let (t, u, meas) = if dim.d() == 2 {
            let h = (0.5 * x).sin();
            (x.cos(), 2.0 * h * h, 2.0)
        } else {
            (1.0 - x, x, 2.0 * PI)
        };
        let (_, q) = zonal_table(dim, lmax, t);
        let fw = f(t) * w * meas * u;
        for (a, ql) in acc.iter_mut().zip(&q) {
            *a -= fw * ql;
        }
    }
    acc
}

fn checked_regular(dim: Dim, f: &dyn Fn(f64) -> f64, width: f64, lmax: usize, what: &str) -> Result<Vec<f64>> {
    let a = regular_eigs(dim, f, width, lmax, 16);
    let b = regular_eigs(dim, f, width, lmax, 24);
    let scale = b.iter().fold(1e-300f64, |m, x| m.max(x.abs()));
    for l in 0..=lmax {
        if (a[l] - b[l]).abs() > 1e-9 * scale {
            return Err(Error::QuadratureNonConvergence(format!("{what} eigenvalue l = {l}")));
        }
    }
    Ok(b)
}

/// λ_0..=λ_lmax for either kernel; λ_0 = 0.
pub fn funk_hecke_eigs(kernel: &Kernel, lmax: usize) -> Result<EigenTable> {
    let base = kernel.base();
    let dim = base.dim;
    let mut lambdas = vec![0.0; lmax + 1];
    match kernel {
        Kernel::Limiting(spec) => {
            if spec.b1 > 0.0 {
                for (l, x) in singular_eigs(spec, lmax)?.into_iter().enumerate() {
                    lambdas[l] += x;
                }
            }
            if !spec.remainder.is_zero() {
                let h = |t: f64| spec.remainder.eval(t);
                for (l, x) in checked_regular(dim, &h, 1.0, lmax, "remainder")?.into_iter().enumerate() {
                    lambdas[l] += x;
                }
            }
        }
        Kernel::HenyeyGreenstein(hg) => {
            let g = hg.g;
            let width = if dim.d() == 2 { (1.0 - g) / g.sqrt() } else { (1.0 - g) * (1.0 - g) / (2.0 * g) };
            let f = |t: f64| kernel.value(t);
            lambdas = checked_regular(dim, &f, width, lmax, "HG")?;
        }
    }
    lambdas[0] = 0.0;
    if lambdas.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    Ok(EigenTable { dim, lambdas })
}

/// Multiply each degree-l coefficient by λ_l.
pub fn apply_scatter_spectral(f: &AngularSpectrum, eigs: &EigenTable) -> Result<AngularSpectrum> {
    if f.lmax() > eigs.lmax() {
        return Err(Error::ParameterOutOfRange(format!(
            "spectrum degree {} exceeds eigenvalue table degree {}",
            f.lmax(),
            eigs.lmax()
        )));
    }
    let mut out = f.clone();
    for (c, &l) in out.coeffs.iter_mut().zip(f.basis.degrees()) {
        *c *= eigs.get(l);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{HGSpec, Remainder};
    use crate::special::gamma;

    #[test]
    fn zonal_q_matches_division() {
        for dim in [Dim::TWO, Dim::THREE] {
            for t in [-0.9, -0.2, 0.3, 0.8] {
                let (g, q) = zonal_table(dim, 12, t);
                for l in 0..=12 {
                    assert!((q[l] - (1.0 - g[l]) / (1.0 - t)).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn hg_circle_closed_form() {
        // d = 2, s = ¼, canonical b1: b^g = (1+g)/((1−g)² + 2g(1−z))^{3/4}; compare with
        // adaptive quadrature in ψ.
        let base = KernelSpec::pure(Dim::TWO, 0.25, HGSpec::canonical_b1(Dim::TWO, 0.25)).unwrap();
        let k = Kernel::HenyeyGreenstein(HGSpec::new(base, 0.9).unwrap());
        let t = funk_hecke_eigs(&k, 6).unwrap();
        for l in 1..=6 {
            let f = |psi: f64| 2.0 * ((l as f64 * psi).cos() - 1.0) * k.value(psi.cos());
            let want = crate::quad::adaptive(&f, 0.0, PI, 1e-12).unwrap();
            assert!((t.get(l) - want).abs() < 1e-9 * want.abs(), "l={l}");
        }
    }

    #[test]
    fn singular_part_is_gamma_ratio() {
        for (dim, s) in [(Dim::TWO, 0.2), (Dim::THREE, 0.5), (Dim::THREE, 0.8)] {
            let spec = KernelSpec::pure(dim, s, 1.3).unwrap();
            let c = crate::kernels::Constants::of(&spec).unwrap();
            let t = funk_hecke_eigs(&Kernel::Limiting(spec), 20).unwrap();
            let nh = dim.n() as f64 / 2.0;
            for l in 0..=20 {
                let lf = l as f64;
                let want = c.d * (c.c_bessel - 4f64.powf(s) * gamma(lf + nh + s) / gamma(lf + nh - s));
                assert!((t.get(l) - want).abs() < 1e-10 * want.abs().max(1.0), "{l}: {} vs {want}", t.get(l));
            }
            assert!(t.is_monotone());
        }
    }

    #[test]
    fn remainder_eigs() {
        // h(z) = 1 + z on S²: λ_1 = 2π ∫ (t − 1)(1 + t) dt = −8π/3, λ_l = −4π for l ≥ 2.
        let spec = KernelSpec::new(Dim::THREE, 0.5, 0.0, Remainder::Polynomial(vec![1.0, 1.0])).unwrap();
        let t = funk_hecke_eigs(&Kernel::Limiting(spec), 4).unwrap();
        assert!((t.get(1) + 8.0 * PI / 3.0).abs() < 1e-12);
        assert!((t.get(3) + 4.0 * PI).abs() < 1e-12);
    }
}
