//! Multi-dimensional complex FFT over row-major arrays, built on `rustfft`.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Forward/inverse transforms for a fixed row-major shape. Inverse is unnormalized.
#[derive(Clone)]
pub struct FftNd {
    shape: Vec<usize>,
    fwd: Vec<Arc<dyn Fft<f64>>>,
    inv: Vec<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for FftNd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd").field("shape", &self.shape).finish()
    }
}

impl FftNd {
    pub fn new(shape: &[usize]) -> FftNd {
        let mut planner = FftPlanner::new();
        FftNd {
            shape: shape.to_vec(),
            fwd: shape.iter().map(|&n| planner.plan_fft_forward(n)).collect(),
            inv: shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv);
    }

    fn run(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.len());
        let dims = self.shape.len();
        for axis in 0..dims {
            let n = self.shape[axis];
            let stride: usize = self.shape[axis + 1..].iter().product();
            if stride == 1 {
                plans[axis].process(data);
                continue;
            }
            let outer = data.len() / (n * stride);
            let mut line = vec![Complex64::default(); n];
            for o in 0..outer {
                let base = o * n * stride;
                for inner in 0..stride {
                    for k in 0..n {
                        line[k] = data[base + k * stride + inner];
                    }
                    plans[axis].process(&mut line);
                    for k in 0..n {
                        data[base + k * stride + inner] = line[k];
                    }
                }
            }
        }
    }
}

/// Signed integer frequency of FFT bin k on an axis of length n.
pub fn signed_freq(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) { k as i64 } else { k as i64 - n as i64 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_2d() {
        let f = FftNd::new(&[4, 8]);
        let orig: Vec<Complex64> = (0..32).map(|i| Complex64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let mut d = orig.clone();
        f.forward(&mut d);
        f.inverse(&mut d);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a / 32.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_2d() {
        let (n0, n1) = (8, 4);
        let f = FftNd::new(&[n0, n1]);
        let mut d: Vec<Complex64> = (0..n0 * n1)
            .map(|i| {
                let (a, b) = (i / n1, i % n1);
                let ph = 2.0 * std::f64::consts::PI * (3.0 * a as f64 / n0 as f64 + b as f64 / n1 as f64);
                Complex64::from_polar(1.0, ph)
            })
            .collect();
        f.forward(&mut d);
        for (i, v) in d.iter().enumerate() {
            let expect = if i == 3 * n1 + 1 { 32.0 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-10);
        }
    }
}
