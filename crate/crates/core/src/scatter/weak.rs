//! Weak form W(u, ψ) = −½ ∬_{1−θ·θ′ ≥ ε} (u(θ′) − u(θ))(ψ(θ′) − ψ(θ)) b(θ·θ′) dθ′ dθ.

use super::harmonics::SphereFn;
use super::sphere::SphereQuadrature;
use crate::error::{Error, Result};
use crate::geom::Direction;
use crate::kernels::Kernel;
use crate::quad::{composite, graded_breakpoints};
use nalgebra::{DMatrix, Matrix3, Vector3};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Cut-off ladder used for extrapolation.
pub const EPS_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Extrapolated weak pairing with its ε ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakLimit {
    pub value: f64,
    /// (ε, W_ε) pairs
    pub ladder: Vec<(f64, f64)>,
    /// max − min over the ladder
    pub spread: f64,
}

fn psi_of(eps: f64) -> f64 {
    2.0 * (0.5 * eps).sqrt().asin()
}

/// Unit vectors orthogonal to θ (one for d = 2, two for d = 3).
fn frame(t: &Direction) -> [[f64; 3]; 2] {
    let c = t.components();
    if c.len() == 2 {
        return [[-c[1], c[0], 0.0], [0.0; 3]];
    }
    let pick = if c[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let d: f64 = (0..3).map(|i| pick[i] * c[i]).sum();
    let mut e1 = [pick[0] - d * c[0], pick[1] - d * c[1], pick[2] - d * c[2]];
    let n1 = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
    e1.iter_mut().for_each(|x| *x /= n1);
    let e2 = [c[1] * e1[2] - c[2] * e1[1], c[2] * e1[0] - c[0] * e1[2], c[0] * e1[1] - c[1] * e1[0]];
    [e1, e2]
}

/// W_ε(f_j, f_j′) for every requested pair and every ε in `eps` (descending), in one pass.
/// `band` bounds the harmonic degree of the inputs.
pub(crate) fn weak_core(
    f: &(dyn Fn(&Direction, &mut [f64]) + Sync),
    k: usize,
    pairs: &[(usize, usize)],
    kernel: &Kernel,
    eps: &[f64],
    outer: &SphereQuadrature,
    band: usize,
) -> Vec<Vec<f64>> {
    let dim = kernel.dim();
    let psis: Vec<f64> = eps.iter().map(|&e| psi_of(e)).collect();
    let lo = psis.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_w = (0.25f64).min(0.5 * PI / (band as f64 + 1.0));
    let mut breaks = vec![lo];
    breaks.extend(graded_breakpoints(lo, PI, lo, 2.0, max_w));
    breaks.extend(psis.iter().cloned());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let rule = composite(&breaks, 12);
    let m = 2 * band + 4;
    let per_node: Vec<Vec<Vec<f64>>> = outer
        .nodes()
        .par_iter()
        .map(|t| {
            let c = t.components();
            let [e1, e2] = frame(t);
            let mut here = vec![0.0; k];
            f(t, &mut here);
            let mut vals = vec![0.0; k];
            let mut acc = vec![vec![0.0; pairs.len()]; eps.len()];
            for (&psi, &w) in rule.nodes.iter().zip(&rule.weights) {
                let (sp, cp) = psi.sin_cos();
                let u = 2.0 * (0.5 * psi).sin().powi(2);
                let b = match kernel {
                    Kernel::Limiting(spec) => spec.b1 * u.powf(-spec.order()) + spec.remainder.eval(1.0 - u),
                    _ => kernel.value(1.0 - u),
                };
                let mut add = |p: [f64; 3], wt: f64| {
                    let dir = Direction::raw(dim, p);
                    f(&dir, &mut vals);
                    let wb = wt * b;
                    for (e, a) in acc.iter_mut().enumerate() {
                        if psi >= psis[e] {
                            for (q, &(i, j)) in pairs.iter().enumerate() {
                                a[q] += wb * (vals[i] - here[i]) * (vals[j] - here[j]);
                            }
                        }
                    }
                };
                if dim.d() == 2 {
                    for sign in [1.0, -1.0] {
                        add([cp * c[0] + sign * sp * e1[0], cp * c[1] + sign * sp * e1[1], 0.0], w);
                    }
                } else {
                    for j in 0..m {
                        let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                        let (sf, cf) = phi.sin_cos();
                        let p = [0, 1, 2].map(|i| cp * c[i] + sp * (cf * e1[i] + sf * e2[i]));
                        add(p, w * sp * 2.0 * PI / m as f64);
                    }
                }
            }
            acc
        })
        .collect();
    let mut out = vec![vec![0.0; pairs.len()]; eps.len()];
    for (node, w) in per_node.iter().zip(outer.weights()) {
        for e in 0..eps.len() {
            for q in 0..pairs.len() {
                out[e][q] += -0.5 * w * node[e][q];
            }
        }
    }
    out
}

/// Outer rule matched to the band of the inputs.
pub fn outer_quadrature(kernel: &Kernel, band: usize) -> Result<SphereQuadrature> {
    let d = kernel.dim();
    SphereQuadrature::for_dim(d, if d.d() == 2 { 2 * band + 2 } else { band + 2 })
}

/// W_ε(u, ψ) with the outer integral on `outer`.
pub fn weak_pairing(
    u: &dyn SphereFn,
    psi: &dyn SphereFn,
    kernel: &Kernel,
    eps: f64,
    outer: &SphereQuadrature,
    band: usize,
) -> Result<f64> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::ParameterOutOfRange(format!("cut-off must lie in (0, 2), got {eps}")));
    }
    let f = |t: &Direction, o: &mut [f64]| {
        o[0] = u.eval(t);
        o[1] = psi.eval(t);
    };
    Ok(weak_core(&f, 2, &[(0, 1)], kernel, &[eps], outer, band)[0][0])
}

/// Exponents of the leading ε corrections: ε^{1−s}, ε^{2−s} for the singular kernel,
/// ε^{n/2+1}, ε^{n/2+2} for a bounded one.
fn exponents(kernel: &Kernel) -> (f64, f64) {
    match kernel {
        Kernel::Limiting(k) if k.b1 > 0.0 => (1.0 - k.s, 2.0 - k.s),
        k => {
            let h = k.dim().n() as f64 / 2.0;
            (h + 1.0, h + 2.0)
        }
    }
}

/// Richardson extrapolation of a three-rung ladder to ε → 0.
pub fn extrapolate(kernel: &Kernel, ladder: &[(f64, f64)]) -> Result<WeakLimit> {
    if ladder.len() != 3 {
        return Err(Error::ParameterOutOfRange("extrapolation needs three rungs".into()));
    }
    let (p1, p2) = exponents(kernel);
    let m = Matrix3::from_fn(|i, j| match j {
        0 => 1.0,
        1 => ladder[i].0.powf(p1),
        _ => ladder[i].0.powf(p2),
    });
    let rhs = Vector3::from_fn(|i, _| ladder[i].1);
    let sol = m.lu().solve(&rhs).ok_or_else(|| Error::NumericalFailure("singular extrapolation".into()))?;
    let (lo, hi) = ladder.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x.1), b.max(x.1)));
    Ok(WeakLimit { value: sol[0], ladder: ladder.to_vec(), spread: hi - lo })
}

/// ε → 0 limit of W_ε(u, ψ) over [`EPS_LADDER`].
pub fn weak_pairing_limit(u: &dyn SphereFn, psi: &dyn SphereFn, kernel: &Kernel, band: usize) -> Result<WeakLimit> {
    let outer = outer_quadrature(kernel, band)?;
    let f = |t: &Direction, o: &mut [f64]| {
        o[0] = u.eval(t);
        o[1] = psi.eval(t);
    };
    let vals = weak_core(&f, 2, &[(0, 1)], kernel, &EPS_LADDER, &outer, band);
    let ladder: Vec<(f64, f64)> = EPS_LADDER.iter().zip(&vals).map(|(&e, v)| (e, v[0])).collect();
    extrapolate(kernel, &ladder)
}

/// Extrapolated W(f_j, f_j) for each of K functions at once.
pub fn weak_diagonal(
    f: &(dyn Fn(&Direction, &mut [f64]) + Sync),
    k: usize,
    kernel: &Kernel,
    band: usize,
) -> Result<Vec<WeakLimit>> {
    let outer = outer_quadrature(kernel, band)?;
    let pairs: Vec<(usize, usize)> = (0..k).map(|j| (j, j)).collect();
    let vals = weak_core(f, k, &pairs, kernel, &EPS_LADDER, &outer, band);
    (0..k)
        .map(|j| {
            let ladder: Vec<(f64, f64)> = EPS_LADDER.iter().zip(&vals).map(|(&e, v)| (e, v[j])).collect();
            extrapolate(kernel, &ladder)
        })
        .collect()
}

/// Extrapolated W(f_i, f_j) for all pairs of K functions, as a symmetric K × K matrix.
pub fn weak_matrix(
    f: &(dyn Fn(&Direction, &mut [f64]) + Sync),
    k: usize,
    kernel: &Kernel,
    band: usize,
) -> Result<DMatrix<f64>> {
    let outer = outer_quadrature(kernel, band)?;
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let vals = weak_core(f, k, &pairs, kernel, &EPS_LADDER, &outer, band);
    let mut m = DMatrix::zeros(k, k);
    for (q, &(i, j)) in pairs.iter().enumerate() {
        let ladder: Vec<(f64, f64)> = EPS_LADDER.iter().zip(&vals).map(|(&e, v)| (e, v[q])).collect();
        let w = extrapolate(kernel, &ladder)?.value;
        m[(i, j)] = w;
        m[(j, i)] = w;
    }
    Ok(m)
}
