use crate::fft::{signed_freq, FftNd};
use crate::geom::Dim;
use crate::solver::{PhaseField, SpatialGrid};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Averaged density ρ(x) = ∫ u(x, θ) dθ.
pub fn rho(u: &PhaseField) -> Vec<f64> {
    u.density()
}

/// β = 2q/(5q − (1 − δ)), q = (d−1)/(1−s). For d = 2 the d = 3 formula is
/// applied unchanged and `extrapolated` is set.
pub fn regularity_exponent(dim: Dim, s: f64, delta: f64) -> (f64, bool) {
    let q = dim.n() as f64 / (1.0 - s);
    (2.0 * q / (5.0 * q - (1.0 - delta)), dim.d() == 2)
}

/// ‖(−Δ_x)^β ρ‖²_{L²_x} = ∫ |k|^{4β} |ρ̂(k)|² dk on the periodic box.
pub fn sobolev_norm_sq(rho: &[f64], grid: &SpatialGrid, beta: f64) -> f64 {
    let d = grid.dim().d();
    let m = grid.m();
    let fft = FftNd::new(&grid.shape());
    let mut data: Vec<Complex64> = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    fft.forward(&mut data);
    let dk = 2.0 * PI / grid.box_size();
    let mut acc = 0.0;
    for (k, z) in data.iter().enumerate() {
        let mut r = k;
        let mut k2 = 0.0;
        for _ in 0..d {
            let f = signed_freq(r % m, m) as f64 * dk;
            k2 += f * f;
            r /= m;
        }
        if k2 > 0.0 {
            acc += k2.powf(2.0 * beta) * z.norm_sqr();
        }
    }
    acc * grid.cell() / data.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoRegularity {
    pub beta: f64,
    pub extrapolated: bool,
    /// ∫ ‖(−Δ_x)^β ρ(t)‖² dt by the trapezoid rule over the snapshot times
    pub value: f64,
    /// (time, ‖(−Δ_x)^β ρ(t)‖²) per snapshot
    pub samples: Vec<(f64, f64)>,
}

/// Time-integrated fractional Sobolev norm of ρ along a trajectory.
pub fn rho_regularity(trajectory: &[PhaseField], s: f64, delta: f64) -> RhoRegularity {
    let Some(first) = trajectory.first() else {
        return RhoRegularity { beta: f64::NAN, extrapolated: false, value: 0.0, samples: Vec::new() };
    };
    let (beta, extrapolated) = regularity_exponent(first.spatial.dim(), s, delta);
    let samples: Vec<(f64, f64)> =
        trajectory.iter().map(|u| (u.time, sobolev_norm_sq(&rho(u), &u.spatial, beta))).collect();
    let value = samples.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    RhoRegularity { beta, extrapolated, value, samples }
}
