//! Exact free streaming on the torus: û(k) ↦ e^{−i(θ·k)dt} û(k) per angular node.

use super::field::{PhaseField, SpatialGrid};
use crate::fft::{signed_freq, FftNd};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Precomputed FFT plan and wave vectors for a spatial grid.
#[derive(Debug, Clone)]
pub struct Transport {
    fft: FftNd,
    /// wave vector per spatial bin; `None` for bins on a Nyquist plane, which are zeroed
    waves: Vec<Option<[f64; 3]>>,
}

impl Transport {
    pub fn new(grid: &SpatialGrid) -> Transport {
        let m = grid.m();
        let d = grid.dim().d();
        let scale = 2.0 * PI / grid.box_size();
        let waves = (0..grid.len())
            .map(|k| {
                let mut w = [0.0; 3];
                let mut r = k;
                for axis in (0..d).rev() {
                    let i = r % m;
                    r /= m;
                    if i == m / 2 {
                        return None;
                    }
                    w[axis] = scale * signed_freq(i, m) as f64;
                }
                Some(w)
            })
            .collect();
        Transport { fft: FftNd::new(&grid.shape()), waves }
    }

    /// Streams every angular slice of `u` for time dt.
    pub fn apply(&self, u: &mut PhaseField, dt: f64) {
        let n = u.angular.len();
        let nx = u.spatial.len();
        let d = u.spatial.dim().d();
        let columns: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let t = u.angular.nodes()[j].components();
                let mut buf: Vec<Complex64> = (0..nx).map(|k| Complex64::new(u.values[k * n + j], 0.0)).collect();
                self.fft.forward(&mut buf);
                for (b, w) in buf.iter_mut().zip(&self.waves) {
                    match w {
                        Some(w) => {
                            let phase: f64 = -(0..d).map(|i| t[i] * w[i]).sum::<f64>() * dt;
                            *b *= Complex64::from_polar(1.0, phase);
                        }
                        None => *b = Complex64::default(),
                    }
                }
                self.fft.inverse(&mut buf);
                let norm = 1.0 / nx as f64;
                buf.iter().map(|c| c.re * norm).collect()
            })
            .collect();
        for (j, col) in columns.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                u.values[k * n + j] = *v;
            }
        }
    }
}

/// u(t + dt) for ∂_t u + θ·∇_x u = 0.
pub fn transport_step(u: &PhaseField, dt: f64) -> PhaseField {
    let mut out = u.clone();
    Transport::new(&u.spatial).apply(&mut out, dt);
    out.time += dt;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Dim;
    use crate::scatter::SphereQuadrature;

    #[test]
    fn translates_a_plane_wave() {
        let g = SpatialGrid::new(Dim::TWO, 2.0 * PI, 16).unwrap();
        let q = SphereQuadrature::circle(5).unwrap();
        let u = PhaseField::from_fn(g, q, |x, _| 2.0 + (2.0 * x[0] - 3.0 * x[1]).sin()).unwrap();
        let dt = 0.37;
        let out = transport_step(&u, dt);
        for k in 0..g.len() {
            let x = g.point(k);
            for (j, t) in u.angular.nodes().iter().enumerate() {
                let c = t.components();
                let y = [x[0] - c[0] * dt, x[1] - c[1] * dt];
                let want = 2.0 + (2.0 * y[0] - 3.0 * y[1]).sin();
                assert!((out.at(k)[j] - want).abs() < 1e-12);
            }
        }
        assert!((out.l2() - u.l2()).abs() < 1e-13 * u.l2());
        assert!((out.mass() - u.mass()).abs() < 1e-13 * u.mass());
    }

    #[test]
    fn x_independent_is_unchanged() {
        let g = SpatialGrid::new(Dim::THREE, 3.0, 8).unwrap();
        let q = SphereQuadrature::gauss(3).unwrap();
        let u = PhaseField::from_fn(g, q, |_, t| 1.0 + t.last()).unwrap();
        let out = transport_step(&u, 0.9);
        assert!(out.values.iter().zip(&u.values).all(|(a, b)| (a - b).abs() < 1e-13));
    }
}
