//! Fractional Laplacians on the stereographic plane R^{d−1}.

mod approx;
mod grid;
mod quadrature;
mod spectral;

pub(crate) use approx::polar_g_points;
pub use approx::{approx_normalization, delta_g, frac_lap_g, frac_lap_g_at, frac_lap_g_compact_far};
pub use grid::{from_weighted, to_weighted, PlaneField, PlaneGrid};
pub use quadrature::{frac_lap_pointwise, frac_lap_quadrature, Exterior};
pub use spectral::{frac_lap_free_space, frac_lap_spectral, Boundary, SpectralPlan};

use crate::kernels::{bessel_constant, frac_constant};
use crate::error::Result;
use crate::quad::{composite, Rule};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Radial cutoff: 1 for r ≤ r1, 0 for r ≥ r2, ½ erfc in between with the width chosen so
/// the profile meets both ends to within 1e−17. Its spectrum decays like a Gaussian.
pub fn smooth_cutoff(r: f64, r1: f64, r2: f64) -> f64 {
    if r <= r1 {
        return 1.0;
    }
    if r >= r2 {
        return 0.0;
    }
    let half = 0.5 * (r2 - r1);
    let w = half / 6.0;
    0.5 * statrs::function::erf::erfc((r - r1 - half) / w)
}

/// Output of [`DecayingLaplacian::apply`]: values are exact free-space
/// (−Δ)^s f only inside `valid_radius`.
#[derive(Debug, Clone)]
pub struct DecayingOutput {
    pub field: PlaneField,
    pub valid_radius: f64,
}

/// Free-space (−Δ)^s for smooth fields that decay too slowly to be truncated,
/// such as ⟨v⟩^{−(d−1−2s)}. The field is split with a smooth radial cutoff χ:
/// fχ goes through the padded spectral plan, and the contribution of f(1−χ)
/// at points where χ = 1 is the regular integral −c ∫ f(1−χ)|v−y|^{−(d−1)−2s} dy,
/// evaluated by quadrature on [r1, ∞).
#[derive(Debug, Clone)]
pub struct DecayingLaplacian {
    plan: SpectralPlan,
    r1: f64,
    r2: f64,
    valid_radius: f64,
    /// far-field nodes: point, quadrature weight, 1 − χ
    far: Vec<([f64; 2], f64, f64)>,
}

impl DecayingLaplacian {
    /// `valid_radius` must be below 0.85 L; the cutoff starts 0.1 L beyond it.
    pub fn new(grid: PlaneGrid, s: f64, valid_radius: f64) -> Result<DecayingLaplacian> {
        let l = grid.half_width();
        if !(valid_radius > 0.0 && valid_radius < 0.85 * l) {
            return Err(crate::error::out_of_range("valid radius must lie in (0, 0.85 L)"));
        }
        let r1 = valid_radius + 0.1 * l;
        let r2 = 0.95 * l;
        let gap = r1 - valid_radius;
        let width = (0.5 * gap).min(1.0);
        let panels = ((r2 - r1) / width).ceil() as usize;
        let breaks: Vec<f64> = (0..=panels).map(|i| r1 + (r2 - r1) * i as f64 / panels as f64).collect();
        let inner = composite(&breaks, 10);
        // y = r2 / t on (0, 1]
        let tail_t = composite(&[0.0, 0.3, 0.7, 1.0], 12);
        let tail = Rule {
            nodes: tail_t.nodes.iter().map(|t| r2 / t).collect(),
            weights: tail_t.nodes.iter().zip(&tail_t.weights).map(|(t, w)| w * r2 / (t * t)).collect(),
        };
        let radial = Rule::concat([inner, tail]);
        let mut far = Vec::new();
        if grid.axes() == 1 {
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                let cut = 1.0 - smooth_cutoff(r, r1, r2);
                far.push(([r, 0.0], w, cut));
                far.push(([-r, 0.0], w, cut));
            }
        } else {
            let m = 128;
            let dphi = 2.0 * PI / m as f64;
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                let cut = 1.0 - smooth_cutoff(r, r1, r2);
                for k in 0..m {
                    let phi = (k as f64 + 0.5) * dphi;
                    far.push(([r * phi.cos(), r * phi.sin()], w * r * dphi, cut));
                }
            }
        }
        Ok(DecayingLaplacian { plan: SpectralPlan::new(grid, s, Boundary::FreeSpace), r1, r2, valid_radius, far })
    }

    pub fn grid(&self) -> PlaneGrid {
        self.plan.grid()
    }

    pub fn cutoff(&self, r: f64) -> f64 {
        smooth_cutoff(r, self.r1, self.r2)
    }

    pub fn apply(&self, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> DecayingOutput {
        let grid = self.grid();
        let axes = grid.axes();
        let s = self.plan.s();
        let mu = axes as f64 + 2.0 * s;
        let c = frac_constant(axes, s);
        let near = PlaneField::from_fn(grid, |v| {
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            f(v) * self.cutoff(r)
        });
        let mut out = self.plan.apply_field(&near);
        let far: Vec<([f64; 2], f64)> =
            self.far.iter().map(|(y, w, cut)| (*y, w * cut * f(&y[..axes]))).collect();
        let vr2 = self.valid_radius * self.valid_radius;
        out.values.par_iter_mut().enumerate().for_each(|(k, o)| {
            let v = grid.node(k);
            if v[0] * v[0] + v[1] * v[1] > vr2 {
                return;
            }
            let mut acc = 0.0;
            for (y, w) in &far {
                let dx = v[0] - y[0];
                let dy = v[1] - y[1];
                acc += w * (dx * dx + dy * dy).powf(-0.5 * mu);
            }
            *o -= c * acc;
        });
        DecayingOutput { field: out, valid_radius: self.valid_radius }
    }
}

/// Relative L² error of the identity (−Δ)^s ⟨v⟩^{−(d−1−2s)} = c_bessel ⟨v⟩^{−(d−1+2s)}
/// on the interior half |v| ≤ L/2 of the grid, using the free-space pipeline.
pub fn bessel_identity_residual(grid: PlaneGrid, s: f64) -> Result<f64> {
    bessel_identity_residual_with(grid, s, Boundary::FreeSpace)
}

/// Same measurement with an explicit boundary treatment; `Periodic` applies the
/// torus multiplier to the truncated profile and shows the truncation error.
pub fn bessel_identity_residual_with(grid: PlaneGrid, s: f64, boundary: Boundary) -> Result<f64> {
    let axes = grid.axes();
    let cb = bessel_constant(grid.dim(), s)?;
    let p = axes as f64 - 2.0 * s;
    let profile = |v: &[f64]| (1.0 + v.iter().map(|x| x * x).sum::<f64>()).powf(-0.5 * p);
    let half = 0.5 * grid.half_width();
    let out = match boundary {
        Boundary::FreeSpace => DecayingLaplacian::new(grid, s, half)?.apply(&profile).field,
        Boundary::Periodic => frac_lap_spectral(&PlaneField::from_fn(grid, profile), s),
    };
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..grid.len() {
        let v = grid.node(k);
        let r2 = v[0] * v[0] + v[1] * v[1];
        if r2 <= half * half {
            let exact = cb * (1.0 + r2).powf(-0.5 * (axes as f64 + 2.0 * s));
            num += (out.values[k] - exact).powi(2);
            den += exact * exact;
        }
    }
    Ok((num / den).sqrt())
}

