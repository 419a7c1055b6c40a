//! Scattering laws b(θ·θ′) and the closed-form constants of the projected
//! representation.
//!
//! Notation used throughout: n = d − 1 is the plane dimension and
//! a = n/2 + s is the singularity order of the limiting kernel.

use crate::error::{out_of_range, Error, Result};
use crate::geom::Dim;
use crate::quad;
use crate::special::gamma;
use std::f64::consts::PI;

/// Smooth, integrable part h(z) of a kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Remainder {
    None,
    Constant(f64),
    /// h(z) = Σ c_k z^k
    Polynomial(Vec<f64>),
}

impl Remainder {
    pub fn eval(&self, z: f64) -> f64 {
        match self {
            Remainder::None => 0.0,
            Remainder::Constant(c) => *c,
            Remainder::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| acc * z + ck),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Remainder::None | Remainder::Constant(_) => 0,
            Remainder::Polynomial(c) => c.len().saturating_sub(1),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Remainder::None => true,
            Remainder::Constant(c) => *c == 0.0,
            Remainder::Polynomial(c) => c.iter().all(|x| *x == 0.0),
        }
    }
}

/// Limiting forward-peaked kernel b(z) = b1 (1 − z)^{-(n/2+s)} + h(z).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub dim: Dim,
    pub s: f64,
    pub b1: f64,
    pub remainder: Remainder,
    /// ∫_{S^{d-1}} h(θ·θ′) dθ′
    pub h_l1: f64,
}

impl KernelSpec {
    pub fn new(dim: Dim, s: f64, b1: f64, remainder: Remainder) -> Result<KernelSpec> {
        let smax = (dim.n() as f64 / 2.0).min(1.0);
        if !(s > 0.0 && s < smax) {
            return Err(out_of_range(format!("s must lie in (0, {smax}), got {s}")));
        }
        if !(b1 >= 0.0) || !b1.is_finite() {
            return Err(out_of_range(format!("b1 must be finite and >= 0, got {b1}")));
        }
        for i in 0..=2000 {
            let z = -1.0 + i as f64 / 1000.0;
            let h = remainder.eval(z);
            if !(h >= 0.0) || !h.is_finite() {
                return Err(out_of_range(format!("remainder h({z}) = {h} is not finite and nonnegative")));
            }
        }
        let h_l1 = if remainder.is_zero() { 0.0 } else { sphere_average(dim, &|t| remainder.eval(t))? };
        Ok(KernelSpec { dim, s, b1, remainder, h_l1 })
    }

    /// Pure singular kernel with h ≡ 0.
    pub fn pure(dim: Dim, s: f64, b1: f64) -> Result<KernelSpec> {
        KernelSpec::new(dim, s, b1, Remainder::None)
    }

    /// a = (d − 1)/2 + s
    pub fn order(&self) -> f64 {
        self.dim.n() as f64 / 2.0 + self.s
    }

    /// The same kernel with the remainder removed.
    pub fn singular_part(&self) -> KernelSpec {
        KernelSpec { remainder: Remainder::None, h_l1: 0.0, ..self.clone() }
    }
}

/// ∫_{S^{d-1}} f(θ·θ′) dθ′ for smooth f.
fn sphere_average(dim: Dim, f: &dyn Fn(f64) -> f64) -> Result<f64> {
    match dim.d() {
        2 => Ok(2.0 * quad::adaptive(&|psi: f64| f(psi.cos()), 0.0, PI, 1e-10)?),
        _ => Ok(2.0 * PI * quad::adaptive(f, -1.0, 1.0, 1e-10)?),
    }
}

/// b1 (1 − z)^{-(n/2+s)} + h(z).
pub fn limiting_kernel(spec: &KernelSpec, z: f64) -> Result<f64> {
    if z >= 1.0 - 1e-14 {
        return Err(Error::SingularArgument(z));
    }
    Ok(spec.b1 * (1.0 - z).powf(-spec.order()) + spec.remainder.eval(z))
}

/// Henyey–Greenstein approximant of a limiting kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct HGSpec {
    pub base: KernelSpec,
    pub g: f64,
}

impl HGSpec {
    pub fn new(base: KernelSpec, g: f64) -> Result<HGSpec> {
        if !(g > 0.0 && g < 1.0) {
            return Err(out_of_range(format!("g must lie in (0, 1), got {g}")));
        }
        Ok(HGSpec { base, g })
    }

    /// The b1 for which the rescaled HG kernel is exactly (1+g)/((1−g)² + 2g(1−z))^a.
    pub fn canonical_b1(dim: Dim, s: f64) -> f64 {
        2f64.powf(1.0 - dim.n() as f64 / 2.0 - s)
    }

    /// Rescaled HG part without the remainder. Normalized so that it tends to
    /// b1 (1 − z)^{-a} as g → 1.
    pub fn singular_value(&self, z: f64) -> f64 {
        let a = self.base.order();
        let g = self.g;
        let scale = self.base.b1 * 2f64.powf(a - 1.0);
        scale * (1.0 + g) / ((1.0 - g) * (1.0 - g) + 2.0 * g * (1.0 - z)).powf(a)
    }
}

/// b^g(z) + h(z).
pub fn hg_rescaled(spec: &HGSpec, z: f64) -> f64 {
    spec.singular_value(z) + spec.base.remainder.eval(z)
}

/// Either scattering law; everything downstream only needs b(z) and the base spec.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Limiting(KernelSpec),
    HenyeyGreenstein(HGSpec),
}

impl Kernel {
    pub fn base(&self) -> &KernelSpec {
        match self {
            Kernel::Limiting(k) => k,
            Kernel::HenyeyGreenstein(h) => &h.base,
        }
    }

    pub fn dim(&self) -> Dim {
        self.base().dim
    }

    /// b(z); infinite at z = 1 for the limiting kernel.
    pub fn value(&self, z: f64) -> f64 {
        match self {
            Kernel::Limiting(k) => {
                if z >= 1.0 {
                    f64::INFINITY
                } else {
                    k.b1 * (1.0 - z).powf(-k.order()) + k.remainder.eval(z)
                }
            }
            Kernel::HenyeyGreenstein(h) => hg_rescaled(h, z),
        }
    }

    /// b(z) − h(z)
    pub fn singular_value(&self, z: f64) -> f64 {
        match self {
            Kernel::Limiting(k) => k.b1 * (1.0 - z).powf(-k.order()),
            Kernel::HenyeyGreenstein(h) => h.singular_value(z),
        }
    }
}

/// c_{n,s} = 4^s Γ(n/2 + s) / (π^{n/2} |Γ(−s)|), the normalization of the
/// singular-integral fractional Laplacian on R^n.
pub fn frac_constant(n: usize, s: f64) -> f64 {
    let nh = n as f64 / 2.0;
    4f64.powf(s) * gamma(nh + s) / (PI.powf(nh) * gamma(-s).abs())
}

/// 2^{2s} Γ(n/2 + s)/Γ(n/2 − s): (−Δ)^s ⟨v⟩^{-(n−2s)} = c ⟨v⟩^{-(n+2s)} on R^n.
pub fn bessel_constant(dim: Dim, s: f64) -> Result<f64> {
    let nh = dim.n() as f64 / 2.0;
    if s >= nh || s <= 0.0 {
        return Err(out_of_range(format!("bessel constant needs 0 < s < {nh}, got {s}")));
    }
    Ok(4f64.powf(s) * gamma(nh + s) / gamma(nh - s))
}

/// Sharp constant S in ‖(−Δ)^{s/2} f‖² ≥ S ‖f‖²_{L^p(R^n)}, p = 2n/(n − 2s).
pub fn sobolev_constant(n: usize, s: f64) -> f64 {
    let nf = n as f64;
    4f64.powf(s) * PI.powf(s) * gamma((nf + 2.0 * s) / 2.0) / gamma((nf - 2.0 * s) / 2.0)
        * (gamma(nf / 2.0) / gamma(nf)).powf(2.0 * s / nf)
}

/// Constants of the projected representation of a kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c_frac: f64,
    pub c_bessel: f64,
    /// D = 2^{n/2 − s} b1 / c_{n,s}
    pub d: f64,
    /// D0 = 2^n D
    pub d0: f64,
    /// D1 = D c_bessel + 2 h_l1
    pub d1: f64,
}

impl Constants {
    pub fn of(spec: &KernelSpec) -> Result<Constants> {
        let n = spec.dim.n();
        let c_frac = frac_constant(n, spec.s);
        let c_bessel = bessel_constant(spec.dim, spec.s)?;
        let d = 2f64.powf(n as f64 / 2.0 - spec.s) * spec.b1 / c_frac;
        let d0 = 2f64.powi(n as i32) * d;
        let d1 = d * c_bessel + 2.0 * spec.h_l1;
        Ok(Constants { c_frac, c_bessel, d, d0, d1 })
    }
}
