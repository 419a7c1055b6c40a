//! Real orthonormal harmonic bases: Fourier modes on S¹, real spherical harmonics on S².

use super::sphere::SphereQuadrature;
use crate::error::{out_of_range, Result};
use crate::geom::{Dim, Direction};
use std::f64::consts::PI;

/// Orthonormal real basis up to degree `lmax`.
///
/// Ordering: d = 2: [1, cos φ, sin φ, cos 2φ, sin 2φ, …]; d = 3: by degree l, then m = −l..l
/// (sin terms for m < 0).
#[derive(Debug, Clone, PartialEq)]
pub struct Harmonics {
    dim: Dim,
    lmax: usize,
    degrees: Vec<usize>,
}

impl Harmonics {
    pub fn new(dim: Dim, lmax: usize) -> Harmonics {
        let degrees = if dim.d() == 2 {
            std::iter::once(0).chain((1..=lmax).flat_map(|l| [l, l])).collect()
        } else {
            (0..=lmax).flat_map(|l| std::iter::repeat_n(l, 2 * l + 1)).collect()
        };
        Harmonics { dim, lmax, degrees }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Index of (l, m); for d = 2, m ∈ {0 (cos), −1 (sin)} style: m ≥ 0 → cos, m < 0 → sin.
    pub fn index(&self, l: usize, m: i64) -> usize {
        if self.dim.d() == 2 {
            if l == 0 { 0 } else { 2 * l - 1 + usize::from(m < 0) }
        } else {
            (l * l) + (m + l as i64) as usize
        }
    }

    /// All basis values at θ.
    pub fn eval(&self, t: &Direction) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: &Direction, out: &mut [f64]) {
        let c = t.components();
        if self.dim.d() == 2 {
            let phi = c[1].atan2(c[0]);
            out[0] = (2.0 * PI).sqrt().recip();
            let a = PI.sqrt().recip();
            for l in 1..=self.lmax {
                let (s, co) = (l as f64 * phi).sin_cos();
                out[2 * l - 1] = a * co;
                out[2 * l] = a * s;
            }
            return;
        }
        let x = c[2].clamp(-1.0, 1.0);
        let st = (c[0] * c[0] + c[1] * c[1]).sqrt();
        let phi = c[1].atan2(c[0]);
        let lmax = self.lmax;
        // normalized associated Legendre, P̃_lm with ∫ (P̃_lm)² dx = (2 − δ_m0)... folded into √2 below
        let mut pmm = (4.0 * PI).sqrt().recip();
        for m in 0..=lmax {
            if m > 0 {
                pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * st;
            }
            let (sm, cm) = (m as f64 * phi).sin_cos();
            let put = |out: &mut [f64], l: usize, p: f64| {
                let base = l * l + l;
                if m == 0 {
                    out[base] = p;
                } else {
                    out[base + m] = std::f64::consts::SQRT_2 * p * cm;
                    out[base - m] = std::f64::consts::SQRT_2 * p * sm;
                }
            };
            put(out, m, pmm);
            if m < lmax {
                let mut p_prev = pmm;
                let mut p = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
                put(out, m + 1, p);
                for l in m + 2..=lmax {
                    let lf = l as f64;
                    let mf = m as f64;
                    let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                    let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                    let next = a * (x * p - b * p_prev);
                    p_prev = p;
                    p = next;
                    put(out, l, p);
                }
            }
        }
    }
}

/// Coefficients of a band-limited field in a [`Harmonics`] basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum {
    pub basis: Harmonics,
    pub coeffs: Vec<f64>,
}

impl AngularSpectrum {
    pub fn zeros(basis: Harmonics) -> AngularSpectrum {
        let n = basis.len();
        AngularSpectrum { basis, coeffs: vec![0.0; n] }
    }

    pub fn lmax(&self) -> usize {
        self.basis.lmax()
    }

    /// Value of the synthesized field at an arbitrary direction.
    pub fn eval(&self, t: &Direction) -> f64 {
        self.basis.eval(t).iter().zip(&self.coeffs).map(|(y, c)| y * c).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// A function on the sphere that can be evaluated anywhere.
pub trait SphereFn: Sync {
    fn eval(&self, t: &Direction) -> f64;
}

impl<F: Fn(&Direction) -> f64 + Sync> SphereFn for F {
    fn eval(&self, t: &Direction) -> f64 {
        self(t)
    }
}

impl SphereFn for AngularSpectrum {
    fn eval(&self, t: &Direction) -> f64 {
        AngularSpectrum::eval(self, t)
    }
}

/// Analysis/synthesis between node values of a quadrature and a harmonic basis.
#[derive(Debug, Clone)]
pub struct SphereTransform {
    quad: SphereQuadrature,
    basis: Harmonics,
    /// basis values, row per node
    table: Vec<f64>,
}

impl SphereTransform {
    /// `lmax` must not exceed the quadrature's exact band.
    pub fn new(quad: SphereQuadrature, lmax: usize) -> Result<SphereTransform> {
        if lmax > quad.max_band() {
            return Err(out_of_range(format!(
                "lmax {lmax} exceeds the band {} resolved by the quadrature",
                quad.max_band()
            )));
        }
        let basis = Harmonics::new(quad.dim(), lmax);
        let k = basis.len();
        let mut table = vec![0.0; quad.len() * k];
        for (i, t) in quad.nodes().iter().enumerate() {
            basis.eval_into(t, &mut table[i * k..(i + 1) * k]);
        }
        Ok(SphereTransform { quad, basis, table })
    }

    pub fn quad(&self) -> &SphereQuadrature {
        &self.quad
    }

    pub fn basis(&self) -> &Harmonics {
        &self.basis
    }

    /// Basis values at node i.
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.basis.len();
        &self.table[i * k..(i + 1) * k]
    }

    pub fn analyze(&self, values: &[f64]) -> AngularSpectrum {
        let k = self.basis.len();
        let mut coeffs = vec![0.0; k];
        for (i, (&v, &w)) in values.iter().zip(self.quad.weights()).enumerate() {
            let wv = w * v;
            for (c, y) in coeffs.iter_mut().zip(self.row(i)) {
                *c += wv * y;
            }
        }
        AngularSpectrum { basis: self.basis.clone(), coeffs }
    }

    pub fn synthesize(&self, spec: &AngularSpectrum) -> Vec<f64> {
        (0..self.quad.len()).map(|i| self.row(i).iter().zip(&spec.coeffs).map(|(y, c)| y * c).sum()).collect()
    }
}

/// Basis function (l, m) as a spectrum.
pub fn single_mode(basis: &Harmonics, l: usize, m: i64) -> AngularSpectrum {
    let mut s = AngularSpectrum::zeros(basis.clone());
    s.coeffs[basis.index(l, m)] = 1.0;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(q: SphereQuadrature, lmax: usize) {
        let t = SphereTransform::new(q, lmax).unwrap();
        let k = t.basis().len();
        for a in 0..k {
            for b in 0..k {
                let mut s = 0.0;
                for i in 0..t.quad().len() {
                    s += t.quad().weights()[i] * t.row(i)[a] * t.row(i)[b];
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-12, "({a},{b}) = {s}");
            }
        }
    }

    #[test]
    fn orthonormal_on_circle() {
        gram(SphereQuadrature::circle(21).unwrap(), 10);
    }

    #[test]
    fn orthonormal_on_sphere() {
        gram(SphereQuadrature::gauss(9).unwrap(), 8);
    }

    #[test]
    fn low_degree_closed_forms() {
        let h = Harmonics::new(Dim::THREE, 2);
        let t = Direction::new(Dim::THREE, &[0.3, -0.4, 0.5]).unwrap();
        let y = h.eval(&t);
        let c = t.components();
        let k = (3.0 / (4.0 * PI)).sqrt();
        assert!((y[h.index(1, 0)] - k * c[2]).abs() < 1e-14);
        assert!((y[h.index(1, 1)].abs() - k * c[0].abs()).abs() < 1e-14);
        assert!((y[h.index(1, -1)].abs() - k * c[1].abs()).abs() < 1e-14);
        let p2 = (5.0 / (16.0 * PI)).sqrt() * (3.0 * c[2] * c[2] - 1.0);
        assert!((y[h.index(2, 0)] - p2).abs() < 1e-14);
    }

    #[test]
    fn band_cap_enforced() {
        assert!(SphereTransform::new(SphereQuadrature::gauss(4).unwrap(), 4).is_err());
        assert!(SphereTransform::new(SphereQuadrature::circle(16).unwrap(), 8).is_err());
    }
}
