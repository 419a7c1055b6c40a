//! The collision operator through the stereographic plane. For θ in the lower hemisphere
//! with v = S(θ), the singular part is
//!
//! I_{b1}(u)(θ) = D⟨v⟩^{n+2s} (−(−Δ)^s(w χ)(v) + c_b u(θ)⟨v⟩^{−n−2s}) + b1 ∫ u(θ′)(1 − χ)(1 − θ·θ′)^{−a} dθ′
//!
//! with w = u_J⟨v⟩^{2s−n} and χ a radial cutoff; the second integral only sees a cap around the
//! north pole. Points in the upper hemisphere are handled in the reflected chart. The HG kernel
//! is integrated pointwise against 1/δ_g on the plane.

use super::harmonics::{SphereFn, SphereTransform};
use super::sphere::SphereQuadrature;
use crate::error::{out_of_range, Result};
use crate::fracop::{polar_g_points, smooth_cutoff, Boundary, PlaneField, PlaneGrid, SpectralPlan};
use crate::geom::{project, unproject, Dim, Direction, PlanePoint};
use crate::kernels::{Constants, Kernel};
use crate::quad::composite;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;

/// [I(u)]_J/⟨v⟩^{d−1} on a plane grid, meaningful for |v| ≤ `valid_radius` (zero elsewhere).
#[derive(Debug, Clone)]
pub struct ProjectedOutput {
    pub field: PlaneField,
    pub valid_radius: f64,
}

/// Values of K functions at a direction, written into the slice.
type Multi<'a> = dyn Fn(&Direction, &mut [f64]) + Sync + 'a;

#[derive(Debug, Clone)]
pub struct ProjectedScatter {
    kernel: Kernel,
    consts: Constants,
    grid: PlaneGrid,
    plan: Option<SpectralPlan>,
    r1: f64,
    r2: f64,
    valid: f64,
    /// far-cap nodes (around the north pole) with weights including 1 − χ
    cap: Vec<(Direction, f64)>,
    /// rule for the remainder part
    ih: Option<SphereQuadrature>,
}

impl ProjectedScatter {
    /// Default plane grids: L = 8 with n = 8192 (d = 2) or 512 (d = 3) nodes per axis.
    pub fn new(kernel: Kernel, band: usize) -> Result<ProjectedScatter> {
        let dim = kernel.dim();
        let n = if dim.d() == 2 { 8192 } else { 512 };
        Self::with_grid(kernel, PlaneGrid::new(dim, 8.0, n)?, band)
    }

    /// `band` bounds the harmonic degree of the inputs; it sizes the remainder rule.
    pub fn with_grid(kernel: Kernel, grid: PlaneGrid, band: usize) -> Result<ProjectedScatter> {
        if grid.dim() != kernel.dim() {
            return Err(out_of_range("grid and kernel dimensions differ"));
        }
        let base = kernel.base();
        let consts = Constants::of(base)?;
        let l = grid.half_width();
        let (valid, r1, r2) = (0.25 * l, 0.375 * l, 0.75 * l);
        let plan = match kernel {
            Kernel::Limiting(ref k) if k.b1 > 0.0 => Some(SpectralPlan::new(grid, k.s, Boundary::FreeSpace)),
            _ => None,
        };
        let cap = if plan.is_some() { cap_rule(grid.dim(), r1, r2) } else { Vec::new() };
        let ih = if base.remainder.is_zero() {
            None
        } else {
            let deg = band + base.remainder.degree();
            Some(SphereQuadrature::for_dim(grid.dim(), if grid.dim().d() == 2 { deg + 2 } else { deg / 2 + 2 })?)
        };
        Ok(ProjectedScatter { kernel, consts, grid, plan, r1, r2, valid, cap, ih })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn grid(&self) -> PlaneGrid {
        self.grid
    }

    pub fn valid_radius(&self) -> f64 {
        self.valid
    }

    /// I(u) at arbitrary directions.
    pub fn apply_at(&self, u: &dyn SphereFn, dirs: &[Direction]) -> Result<Vec<f64>> {
        let f = |t: &Direction, out: &mut [f64]| out[0] = u.eval(t);
        let m = self.apply_many(&f, 1, dirs)?;
        Ok(m.into_iter().map(|r| r[0]).collect())
    }

    /// Matrix M with M[i, k] = I(Y_k)(θ_i) over the nodes and basis of a transform.
    pub fn node_matrix(&self, tr: &SphereTransform) -> Result<DMatrix<f64>> {
        let basis = tr.basis().clone();
        let f = move |t: &Direction, out: &mut [f64]| basis.eval_into(t, out);
        let k = tr.basis().len();
        let rows = self.apply_many(&f, k, tr.quad().nodes())?;
        Ok(DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]))
    }

    /// [I(u)]_J/⟨v⟩^{d−1} on the plane grid.
    pub fn apply_plane(&self, u: &dyn SphereFn) -> Result<ProjectedOutput> {
        let grid = self.grid;
        let axes = grid.axes();
        let inside: Vec<usize> = (0..grid.len())
            .filter(|&k| grid.node(k)[..axes].iter().map(|x| x * x).sum::<f64>() <= self.valid * self.valid)
            .collect();
        let dirs: Vec<Direction> = inside.iter().map(|&k| unproject(&PlanePoint::new(grid.dim(), &grid.node(k)[..axes]).unwrap())).collect();
        let vals = self.apply_at(u, &dirs)?;
        let mut values = vec![0.0; grid.len()];
        for (&k, val) in inside.iter().zip(vals) {
            let r2: f64 = grid.node(k)[..axes].iter().map(|x| x * x).sum();
            values[k] = val * (1.0 + r2).powf(-(axes as f64) / 2.0);
        }
        Ok(ProjectedOutput { field: PlaneField::new(grid, values)?, valid_radius: self.valid })
    }

    fn apply_many(&self, f: &Multi, k: usize, dirs: &[Direction]) -> Result<Vec<Vec<f64>>> {
        let mut out = vec![vec![0.0; k]; dirs.len()];
        for north in [false, true] {
            let idx: Vec<usize> = (0..dirs.len()).filter(|&i| (dirs[i].last() > 0.0) == north).collect();
            if idx.is_empty() {
                continue;
            }
            let local: Vec<Direction> = idx.iter().map(|&i| if north { dirs[i].reflect() } else { dirs[i] }).collect();
            let fc = |t: &Direction, o: &mut [f64]| if north { f(&t.reflect(), o) } else { f(t, o) };
            let vals = self.chart_block(&fc, k, &local)?;
            for (&i, v) in idx.iter().zip(vals) {
                out[i] = v;
            }
        }
        if let Some(q) = &self.ih {
            self.add_remainder(f, k, dirs, q, &mut out);
        }
        Ok(out)
    }

    /// Singular (or HG) part at points of the lower hemisphere.
    fn chart_block(&self, f: &Multi, k: usize, dirs: &[Direction]) -> Result<Vec<Vec<f64>>> {
        match &self.kernel {
            Kernel::Limiting(spec) => {
                let Some(plan) = &self.plan else {
                    return Ok(vec![vec![0.0; k]; dirs.len()]);
                };
                let grid = self.grid;
                let axes = grid.axes();
                let n = axes as f64;
                let s = spec.s;
                let a = n / 2.0 + s;
                // weighted, cut-off samples: one row of K values per grid node
                let samples: Vec<Vec<f64>> = (0..grid.len())
                    .into_par_iter()
                    .map(|node| {
                        let v = grid.node(node);
                        let r2: f64 = v[..axes].iter().map(|x| x * x).sum();
                        let chi = smooth_cutoff(r2.sqrt(), self.r1, self.r2);
                        let mut row = vec![0.0; k];
                        if chi > 0.0 {
                            f(&unproject(&PlanePoint::new(grid.dim(), &v[..axes]).unwrap()), &mut row);
                            let wgt = chi * (1.0 + r2).powf(s - n / 2.0);
                            row.iter_mut().for_each(|x| *x *= wgt);
                        }
                        row
                    })
                    .collect();
                let points: Vec<PlanePoint> = dirs.iter().map(project).collect::<Result<_>>()?;
                let fl: Vec<Vec<f64>> = (0..k)
                    .into_par_iter()
                    .map(|j| {
                        let col: Vec<f64> = samples.iter().map(|r| r[j]).collect();
                        let field = PlaneField { grid, values: plan.apply(&col) };
                        points.iter().map(|p| field.interpolate_order(p.components(), 16)).collect()
                    })
                    .collect();
                let cap_vals: Vec<Vec<f64>> = self
                    .cap
                    .iter()
                    .map(|(t, _)| {
                        let mut row = vec![0.0; k];
                        f(t, &mut row);
                        row
                    })
                    .collect();
                let c = &self.consts;
                Ok(dirs
                    .par_iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let b = 1.0 + points[i].norm_sq();
                        let mut here = vec![0.0; k];
                        f(t, &mut here);
                        let mut row: Vec<f64> =
                            (0..k).map(|j| c.d * b.powf(a) * (-fl[j][i] + c.c_bessel * here[j] * b.powf(-a))).collect();
                        for ((tc, w), cv) in self.cap.iter().zip(&cap_vals) {
                            let kern = spec.b1 * w * (1.0 - t.dot(tc)).powf(-a);
                            for (r, x) in row.iter_mut().zip(cv) {
                                *r += kern * x;
                            }
                        }
                        row
                    })
                    .collect())
            }
            Kernel::HenyeyGreenstein(hg) => {
                let base = &hg.base;
                let dim = base.dim;
                let n = dim.n() as f64;
                let a = n / 2.0 + base.s;
                let pref = base.b1 * 2f64.powf(a - 1.0 + n);
                dirs.par_iter()
                    .map(|t| {
                        let v = project(t)?;
                        let vc = v.components();
                        let mut here = vec![0.0; k];
                        f(t, &mut here);
                        let mut acc = vec![0.0; k];
                        let mut vals = vec![0.0; k];
                        for (p, w) in polar_g_points(vc, base.s, hg.g, 0.5, 64, n - 1.0) {
                            let pp = PlanePoint::new(dim, &p[..vc.len()]).unwrap();
                            f(&unproject(&pp), &mut vals);
                            let wt = w * (1.0 + pp.norm_sq()).powf(base.s - n / 2.0);
                            for j in 0..k {
                                acc[j] += wt * (vals[j] - here[j]);
                            }
                        }
                        let scale = pref * (1.0 + v.norm_sq()).powf(a);
                        Ok(acc.into_iter().map(|x| scale * x).collect())
                    })
                    .collect()
            }
        }
    }

    fn add_remainder(&self, f: &Multi, k: usize, dirs: &[Direction], q: &SphereQuadrature, out: &mut [Vec<f64>]) {
        let rem = &self.kernel.base().remainder;
        let qvals: Vec<Vec<f64>> = q
            .nodes()
            .iter()
            .map(|t| {
                let mut row = vec![0.0; k];
                f(t, &mut row);
                row
            })
            .collect();
        out.par_iter_mut().zip(dirs).for_each(|(row, t)| {
            let mut here = vec![0.0; k];
            f(t, &mut here);
            for ((tq, w), qv) in q.nodes().iter().zip(q.weights()).zip(&qvals) {
                let h = w * rem.eval(t.dot(tq));
                for j in 0..k {
                    row[j] += h * (qv[j] - here[j]);
                }
            }
        });
    }
}

/// Directions with |S(θ)| ≥ r1, parametrized by the reflected chart ṽ with |ṽ| ≤ 1/r1.
fn cap_rule(dim: Dim, r1: f64, r2: f64) -> Vec<(Direction, f64)> {
    let (a, b) = (1.0 / r2, 1.0 / r1);
    let mut breaks = vec![0.0, 0.5 * a, a];
    breaks.extend((1..=4).map(|i| a + (b - a) * i as f64 / 4.0));
    let radial = composite(&breaks, 16);
    let nn = dim.n() as i32;
    let mut out = Vec::new();
    let mut push = |c: &[f64], w: f64| {
        let p = PlanePoint::new(dim, c).unwrap();
        let rho = p.norm_sq().sqrt();
        let weight = w * 2f64.powi(nn) * (1.0 + p.norm_sq()).powi(-nn) * (1.0 - smooth_cutoff(1.0 / rho, r1, r2));
        out.push((unproject(&p).reflect(), weight));
    };
    if dim.d() == 2 {
        for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
            push(&[r], w);
            push(&[-r], w);
        }
    } else {
        let m = 64;
        for j in 0..m {
            let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            for (&r, &w) in radial.nodes.iter().zip(&radial.weights) {
                push(&[r * phi.cos(), r * phi.sin()], w * r * 2.0 * PI / m as f64);
            }
        }
    }
    out
}

/// [I(u)]_J/⟨v⟩^{d−1} on the default plane grid for a field of harmonic degree ≤ `band`.
pub fn apply_scatter_projected(u: &dyn SphereFn, kernel: &Kernel, band: usize) -> Result<ProjectedOutput> {
    ProjectedScatter::new(kernel.clone(), band)?.apply_plane(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{HGSpec, KernelSpec, Remainder};
    use crate::scatter::{funk_hecke_eigs, SphereTransform};

    fn check_modes(kernel: Kernel, lmax: usize, tol: f64) {
        let dim = kernel.dim();
        let q = SphereQuadrature::for_dim(dim, if dim.d() == 2 { 2 * lmax + 2 } else { lmax + 1 }).unwrap();
        let tr = SphereTransform::new(q, lmax).unwrap();
        let eigs = funk_hecke_eigs(&kernel, lmax).unwrap();
        let op = ProjectedScatter::new(kernel, lmax).unwrap();
        let m = op.node_matrix(&tr).unwrap();
        for j in 0..tr.basis().len() {
            let l = tr.basis().degrees()[j];
            let lam = eigs.get(l);
            let scale = eigs.min().abs();
            for i in 0..tr.quad().len() {
                let want = lam * tr.row(i)[j];
                assert!((m[(i, j)] - want).abs() < tol * scale, "l={l} node {i}: {} vs {want}", m[(i, j)]);
            }
        }
    }

    #[test]
    fn harmonics_are_eigenfunctions_circle() {
        let spec = KernelSpec::new(Dim::TWO, 0.25, 1.0, Remainder::Constant(0.3)).unwrap();
        check_modes(Kernel::Limiting(spec), 8, 1e-9);
    }

    #[test]
    fn harmonics_are_eigenfunctions_sphere() {
        let spec = KernelSpec::pure(Dim::THREE, 0.5, 1.0).unwrap();
        check_modes(Kernel::Limiting(spec), 6, 1e-8);
    }

    #[test]
    fn hg_modes_circle() {
        let spec = KernelSpec::pure(Dim::TWO, 0.25, 1.0).unwrap();
        check_modes(Kernel::HenyeyGreenstein(HGSpec::new(spec, 0.9).unwrap()), 6, 1e-8);
    }

    #[test]
    fn hg_modes_sphere() {
        let spec = KernelSpec::new(Dim::THREE, 0.5, 1.0, Remainder::Constant(0.2)).unwrap();
        check_modes(Kernel::HenyeyGreenstein(HGSpec::new(spec, 0.95).unwrap()), 3, 1e-8);
    }

    #[test]
    fn constants_vanish_on_plane() {
        let spec = KernelSpec::pure(Dim::THREE, 0.5, 1.0).unwrap();
        let out = apply_scatter_projected(&|_: &Direction| 1.0, &Kernel::Limiting(spec), 0).unwrap();
        assert!(out.field.max_abs() < 1e-8, "{}", out.field.max_abs());
    }
}
