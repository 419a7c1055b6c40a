//! Singular-integral fractional Laplacian
//! (−Δ)^s f(v) = c_{n,s} PV ∫ (f(v) − f(v+z)) |z|^{−n−2s} dz.

use super::grid::PlaneField;
use crate::error::{out_of_range, Result};
use crate::kernels::frac_constant;
use crate::quad::{composite, gauss_jacobi, gauss_legendre};
use crate::special::lattice_zeta;
use std::f64::consts::PI;

/// Lattice-sum quadrature of the singular integral at one grid node.
///
/// The punctured lattice sum is corrected for the excluded cell by the leading
/// term of its generalized Euler–Maclaurin expansion,
/// (Δf/2n) h^{2−2s} Z_n(n+2s−2), with Z_n the Epstein zeta of Z^n, and the
/// region outside the grid contributes ∫(f(v) − f(v+z))|z|^{−n−2s} (f there is
/// described by `exterior`).
pub fn frac_lap_quadrature(f: &PlaneField, node: usize, s: f64, exterior: Exterior) -> Result<f64> {
    let g = f.grid;
    let n = g.n();
    let axes = g.axes();
    let h = g.spacing();
    let idx = g.index(node);
    let interior = |k: usize| k >= 2 && k + 2 < n;
    if !interior(idx[0]) || (axes == 2 && !interior(idx[1])) {
        return Err(out_of_range("frac_lap_quadrature needs a node at least two cells from the boundary"));
    }
    let mu = axes as f64 + 2.0 * s;
    let fv = f.values[node];
    let mut sum = 0.0;
    for k in 0..g.len() {
        if k == node {
            continue;
        }
        let j = g.index(k);
        let dx = (j[0] as f64 - idx[0] as f64) * h;
        let dy = if axes == 2 { (j[1] as f64 - idx[1] as f64) * h } else { 0.0 };
        sum += (fv - f.values[k]) * (dx * dx + dy * dy).powf(-0.5 * mu);
    }
    sum *= g.cell();
    // fourth-order Laplacian at the node
    let mut lap = 0.0;
    for ax in 0..axes {
        let at = |off: i64| {
            let mut j = idx;
            j[ax] = (j[ax] as i64 + off) as usize;
            f.values[g.flat(j)]
        };
        lap += (-at(2) + 16.0 * at(1) - 30.0 * fv + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
    }
    let correction = lap / (2.0 * axes as f64) * h.powf(2.0 - 2.0 * s) * lattice_zeta(axes, mu - 2.0);
    // region outside the union of lattice cells
    let lo: Vec<f64> = (0..axes).map(|a| (idx[a] as f64 + 0.5) * h).collect();
    let hi: Vec<f64> = (0..axes).map(|a| (n as f64 - idx[a] as f64 - 0.5) * h).collect();
    let ext = match exterior {
        Exterior::Zero => {
            fv * if axes == 1 {
                (lo[0].powf(1.0 - mu) + hi[0].powf(1.0 - mu)) / (mu - 1.0)
            } else {
                outside_rectangle(lo[0], hi[0], lo[1], hi[1], mu)
            }
        }
        Exterior::Analytic(ff) => {
            let v = g.node(node);
            exterior_integral(&|z: &[f64]| {
                let p: Vec<f64> = (0..axes).map(|a| v[a] + z[a]).collect();
                fv - ff(&p)
            }, &lo, &hi, s)
        }
    };
    Ok(frac_constant(axes, s) * (sum + correction + ext))
}

/// How a grid field continues beyond the grid.
#[derive(Clone, Copy)]
pub enum Exterior<'a> {
    /// f = 0 outside the grid
    Zero,
    /// f is given by this function outside the grid
    Analytic(&'a dyn Fn(&[f64]) -> f64),
}

/// ∫ G(z) |z|^{−n−2s} over R^n minus the box [−lo, hi]; polar rays from 0 with
/// r = R(φ)/t and a Gauss–Jacobi rule for the t^{2s−1} weight.
fn exterior_integral(gfun: &dyn Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], s: f64) -> f64 {
    let tail = gauss_jacobi(40, 0.0, 2.0 * s - 1.0).expect("valid exponents");
    let ray = |w: [f64; 2], r0: f64| {
        // R^{−2s} ∫_0^1 G(Rω/t) t^{2s−1} dt, with t = (1+x)/2
        let mut acc = 0.0;
        for (&x, &wt) in tail.nodes.iter().zip(&tail.weights) {
            let t = 0.5 * (1.0 + x);
            let r = r0 / t;
            acc += wt * 0.5f64.powf(2.0 * s) * gfun(&[r * w[0], r * w[1]][..lo.len()]);
        }
        r0.powf(-2.0 * s) * acc
    };
    if lo.len() == 1 {
        return ray([1.0, 0.0], hi[0]) + ray([-1.0, 0.0], lo[0]);
    }
    let (x0, x1, y0, y1) = (lo[0], hi[0], lo[1], hi[1]);
    let dist = |phi: f64| {
        let (c, s) = (phi.cos(), phi.sin());
        let tx = if c > 0.0 { x1 / c } else if c < 0.0 { -x0 / c } else { f64::INFINITY };
        let ty = if s > 0.0 { y1 / s } else if s < 0.0 { -y0 / s } else { f64::INFINITY };
        tx.min(ty)
    };
    let breaks = [0.0, y1.atan2(x1), y1.atan2(-x0), (-y0).atan2(-x0) + 2.0 * PI, (-y0).atan2(x1) + 2.0 * PI, 2.0 * PI];
    let rule = gauss_legendre(32);
    breaks
        .windows(2)
        .map(|w| rule.mapped(w[0], w[1]).integrate(|phi| ray([phi.cos(), phi.sin()], dist(phi))))
        .sum()
}

/// ∫ |z|^{-p} over R² minus the rectangle [−x0, x1] × [−y0, y1] (which contains 0).
fn outside_rectangle(x0: f64, x1: f64, y0: f64, y1: f64, p: f64) -> f64 {
    // corners in angular order, starting from the +x axis
    let corners = [
        (y1.atan2(x1), 0usize),
        (y1.atan2(-x0), 1),
        ((-y0).atan2(-x0) + 2.0 * PI, 2),
        ((-y0).atan2(x1) + 2.0 * PI, 3),
    ];
    let dist = |phi: f64| {
        let (c, s) = (phi.cos(), phi.sin());
        let tx = if c > 0.0 { x1 / c } else if c < 0.0 { -x0 / c } else { f64::INFINITY };
        let ty = if s > 0.0 { y1 / s } else if s < 0.0 { -y0 / s } else { f64::INFINITY };
        tx.min(ty)
    };
    let mut breaks = vec![0.0];
    breaks.extend(corners.iter().map(|c| c.0));
    breaks.push(2.0 * PI);
    let rule = gauss_legendre(32);
    breaks
        .windows(2)
        .map(|w| rule.mapped(w[0], w[1]).integrate(|phi| dist(phi).powf(2.0 - p)))
        .sum::<f64>()
        / (p - 2.0)
}

/// Pointwise (−Δ)^s f(v) on R^n (n = v.len() ∈ {1, 2}) for an analytic f.
///
/// Symmetrized polar form c ∫_{half sphere} ∫_0^∞ (2f(v) − f(v+rω) − f(v−rω)) r^{−1−2s} dr dω:
/// Gauss–Jacobi with weight r^{1−2s} near 0, composite Gauss–Legendre panels up
/// to 1024·scale, and a mapped rule r = R/t beyond. `scale` is the length over
/// which f varies.
pub fn frac_lap_pointwise(f: &dyn Fn(&[f64]) -> f64, v: &[f64], s: f64, scale: f64) -> f64 {
    let axes = v.len();
    let r0 = 0.5 * scale;
    let r_far = 1024.0 * scale;
    let head = gauss_jacobi(28, 0.0, 1.0 - 2.0 * s).expect("valid exponents");
    let mut breaks: Vec<f64> = (0..=15).map(|i| r0 + 0.5 * scale * i as f64).collect();
    while *breaks.last().unwrap() < r_far {
        let b = breaks.last().unwrap() * 1.25;
        breaks.push(b.min(r_far));
    }
    let mid = composite(&breaks, 16);
    let tail = gauss_jacobi(40, 0.0, 2.0 * s - 1.0).expect("valid exponents");
    let fv = f(v);
    let along = |w: [f64; 2]| {
        let at = |r: f64| {
            let p: Vec<f64> = (0..axes).map(|i| v[i] + r * w[i]).collect();
            let q: Vec<f64> = (0..axes).map(|i| v[i] - r * w[i]).collect();
            f(&p) + f(&q)
        };
        // [0, r0]: ∫ F(r)/r² r^{1−2s} dr with r = r0 (1+x)/2
        let mut acc = 0.0;
        let jac = (0.5 * r0).powf(2.0 - 2.0 * s);
        for (&x, &wt) in head.nodes.iter().zip(&head.weights) {
            let r = 0.5 * r0 * (1.0 + x);
            acc += wt * jac * (2.0 * fv - at(r)) / (r * r);
        }
        for (&r, &wt) in mid.nodes.iter().zip(&mid.weights) {
            acc += wt * (2.0 * fv - at(r)) * r.powf(-1.0 - 2.0 * s);
        }
        // [R, ∞): 2f(v) R^{−2s}/(2s) − R^{−2s} ∫_0^1 (f(v+Rω/t) + f(v−Rω/t)) t^{2s−1} dt
        acc += 2.0 * fv * r_far.powf(-2.0 * s) / (2.0 * s);
        let mut t_int = 0.0;
        for (&x, &wt) in tail.nodes.iter().zip(&tail.weights) {
            let t = 0.5 * (1.0 + x);
            t_int += wt * 0.5f64.powf(2.0 * s) * at(r_far / t);
        }
        acc - r_far.powf(-2.0 * s) * t_int
    };
    let total = if axes == 1 {
        along([1.0, 0.0])
    } else {
        let m = 64;
        (0..m)
            .map(|k| {
                let phi = PI * k as f64 / m as f64;
                along([phi.cos(), phi.sin()]) * PI / m as f64
            })
            .sum()
    };
    frac_constant(axes, s) * total
}
