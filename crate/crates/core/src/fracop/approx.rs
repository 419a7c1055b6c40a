//! The bounded-kernel approximation (−Δ_v)^s_g f(v) = ∫ (f(v) − f(v′)) / δ_g(v, v′) dv′ with
//! δ_g(v, v′) = (1+g)^{−1} ((1−g)²⟨v⟩²⟨v′⟩² + 4g|v − v′|²)^{(d−1)/2+s}.

use super::grid::PlaneField;
use crate::kernels::frac_constant;
use crate::quad::{composite, gauss_jacobi, graded_breakpoints, Rule};
use rayon::prelude::*;
use std::f64::consts::PI;

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// δ_g(v, v′); symmetric in its arguments.
pub fn delta_g(v: &[f64], w: &[f64], s: f64, g: f64) -> f64 {
    let a = v.len() as f64 / 2.0 + s;
    let d2: f64 = v.iter().zip(w).map(|(x, y)| (x - y) * (x - y)).sum();
    let q = (1.0 - g) * (1.0 - g) * (1.0 + norm_sq(v)) * (1.0 + norm_sq(w)) + 4.0 * g * d2;
    q.powf(a) / (1.0 + g)
}

/// κ with κ (−Δ)^s_g → (−Δ)^s as g → 1: 1/δ_g → 2^{1−n−2s}|v − v′|^{−n−2s}, so κ = c_{n,s} 2^{n+2s−1}.
pub fn approx_normalization(n: usize, s: f64) -> f64 {
    frac_constant(n, s) * 2f64.powf(n as f64 + 2.0 * s - 1.0)
}

/// Radial rule for ∫_0^∞ … r^{n−1} dr around a point where δ_g peaks on the scale `eps`.
fn radial_rule(eps: f64, scale: f64) -> (Rule, f64) {
    let r_far = 16.0 * scale;
    let mut breaks = vec![0.0];
    breaks.extend(graded_breakpoints(0.25 * eps.min(scale), r_far, 0.25 * eps.min(scale), 2.0, 0.5 * scale));
    breaks.dedup();
    (composite(&breaks, 12), r_far)
}

/// Nodes and weights for ∫ F(v′)/δ_g(v, v′) dv′ ≈ Σ w_k F(p_k)/δ_g(v, p_k), polar around v.
/// F must vanish at v′ = v; `scale` is its variation length. Beyond r = 16·scale the
/// substitution r = R/t is used, and the integrand is assumed to behave like t^{tail}
/// times a smooth function of t.
pub(crate) fn polar_g_points(v: &[f64], s: f64, g: f64, scale: f64, angles: usize, tail: f64) -> Vec<([f64; 2], f64)> {
    let axes = v.len();
    let eps = (1.0 - g) * (1.0 + norm_sq(v)) / (2.0 * g.sqrt());
    let (rule, r_far) = radial_rule(eps, scale);
    let tail_rule = gauss_jacobi(40, 0.0, tail).expect("valid exponents");
    // (r, radial weight including r^{n−1})
    let mut radial: Vec<(f64, f64)> =
        rule.nodes.iter().zip(&rule.weights).map(|(&r, &w)| (r, w * r.powi(axes as i32 - 1))).collect();
    // r = R/t: ∫_0^1 term(R/t) R/t² dt, weight t^{tail} factored out
    for (&x, &wt) in tail_rule.nodes.iter().zip(&tail_rule.weights) {
        let t = 0.5 * (1.0 + x);
        let r = r_far / t;
        let w = wt * 0.5f64.powf(tail + 1.0) * r_far / (t * t) * t.powf(-tail);
        radial.push((r, w * r.powi(axes as i32 - 1)));
    }
    let dirs: Vec<([f64; 2], f64)> = if axes == 1 {
        vec![([1.0, 0.0], 1.0)]
    } else {
        (0..angles)
            .map(|k| {
                let phi = PI * (k as f64 + 0.5) / angles as f64;
                ([phi.cos(), phi.sin()], PI / angles as f64)
            })
            .collect()
    };
    let mut out = Vec::with_capacity(2 * radial.len() * dirs.len());
    for (w, wa) in &dirs {
        for &(r, wr) in &radial {
            for sign in [1.0, -1.0] {
                let mut p = [0.0; 2];
                for i in 0..axes {
                    p[i] = v[i] + sign * r * w[i];
                }
                out.push((p, wa * wr / delta_g(v, &p[..axes], s, g)));
            }
        }
    }
    out
}

/// Pointwise (−Δ)^s_g f(v) for a smooth f that decays at infinity; `scale` is the length
/// over which f varies.
pub fn frac_lap_g_at(f: &dyn Fn(&[f64]) -> f64, v: &[f64], s: f64, g: f64, scale: f64) -> f64 {
    let fv = f(v);
    let axes = v.len();
    polar_g_points(v, s, g, scale, 64, 2.0 * s - 1.0).iter().map(|(p, w)| w * (fv - f(&p[..axes]))).sum()
}

/// (−Δ)^s_g f(v) = −∫_{|v′|<R} f(v′)/δ_g(v, v′) dv′ at a point v outside the support
/// |v′| < R of f. Polar Gauss–Legendre around the origin.
pub fn frac_lap_g_compact_far(f: &dyn Fn(&[f64]) -> f64, support: f64, v: &[f64], s: f64, g: f64) -> f64 {
    let axes = v.len();
    let radial = composite(&(0..=16).map(|i| support * i as f64 / 16.0).collect::<Vec<_>>(), 12);
    if axes == 1 {
        let mut acc = 0.0;
        for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
            for y in [r, -r] {
                acc += w * f(&[y]) / delta_g(v, &[y], s, g);
            }
        }
        return -acc;
    }
    let m = 128;
    let mut acc = 0.0;
    for k in 0..m {
        let phi = 2.0 * PI * (k as f64 + 0.5) / m as f64;
        for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
            let y = [r * phi.cos(), r * phi.sin()];
            acc += w * r * (2.0 * PI / m as f64) * f(&y) / delta_g(v, &y, s, g);
        }
    }
    -acc
}

/// (−Δ)^s_g of a grid field, using its 8-point Lagrange interpolant (zero
/// outside the grid) as the integrand. Intended for moderate grids.
pub fn frac_lap_g(f: &PlaneField, s: f64, g: f64) -> PlaneField {
    let grid = f.grid;
    let axes = grid.axes();
    let interp = |p: &[f64]| f.interpolate(p);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| frac_lap_g_at(&interp, &grid.node(k)[..axes], s, g, 4.0 * grid.spacing()))
        .collect();
    PlaneField { grid, values }
}
