use crate::error::{out_of_range, Result};
use crate::geom::{Dim, Direction};
use crate::quad::gauss_legendre;
use std::f64::consts::PI;

/// Nodes and positive weights on S^{d−1}.
///
/// d = 2: N uniform angles φ_j = 2π(j + ½)/N, exact for trigonometric degree N − 1.
/// d = 3: Gauss–Legendre in θ_3 × 2N uniform azimuths, exact for degree 2N − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    dim: Dim,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
    degree: usize,
    /// N (circle nodes for d = 2, polar rings for d = 3)
    size: usize,
}

impl SphereQuadrature {
    pub fn circle(n: usize) -> Result<SphereQuadrature> {
        if n < 4 {
            return Err(out_of_range("circle quadrature needs at least 4 nodes"));
        }
        let nodes = (0..n)
            .map(|j| {
                let phi = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                Direction::raw(Dim::TWO, [phi.cos(), phi.sin(), 0.0])
            })
            .collect();
        Ok(SphereQuadrature { dim: Dim::TWO, nodes, weights: vec![2.0 * PI / n as f64; n], degree: n - 1, size: n })
    }

    pub fn gauss(n_polar: usize) -> Result<SphereQuadrature> {
        if n_polar < 2 {
            return Err(out_of_range("sphere quadrature needs at least 2 polar rings"));
        }
        let gl = gauss_legendre(n_polar);
        let naz = 2 * n_polar;
        let mut nodes = Vec::with_capacity(n_polar * naz);
        let mut weights = Vec::with_capacity(n_polar * naz);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let st = (1.0 - x * x).sqrt();
            for k in 0..naz {
                let phi = 2.0 * PI * (k as f64 + 0.5) / naz as f64;
                nodes.push(Direction::raw(Dim::THREE, [st * phi.cos(), st * phi.sin(), x]));
                weights.push(w * 2.0 * PI / naz as f64);
            }
        }
        Ok(SphereQuadrature { dim: Dim::THREE, nodes, weights, degree: 2 * n_polar - 1, size: n_polar })
    }

    /// `circle(size)` for d = 2, `gauss(size)` for d = 3.
    pub fn for_dim(dim: Dim, size: usize) -> Result<SphereQuadrature> {
        if dim.d() == 2 { Self::circle(size) } else { Self::gauss(size) }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Largest harmonic degree whose products are integrated exactly.
    pub fn max_band(&self) -> usize {
        if self.dim.d() == 2 { (self.size - 1) / 2 } else { self.size - 1 }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).zip(&self.weights).map(|((x, y), w)| x * y * w).sum()
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).sqrt()
    }

    pub fn sample(&self, f: &dyn Fn(&Direction) -> f64) -> Vec<f64> {
        self.nodes.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        for q in [SphereQuadrature::circle(17).unwrap(), SphereQuadrature::gauss(9).unwrap()] {
            let total: f64 = q.weights().iter().sum();
            assert!((total - q.dim().sphere_area()).abs() < 1e-12);
            for t in q.nodes() {
                let n: f64 = t.components().iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gauss_exactness() {
        // ∫ x^2 y^2 z^4 over S² = 4π · 1·1·3 / (3·5·7·9) · ... use the monomial formula
        // ∫ x^{2a} y^{2b} z^{2c} = 2 Γ(a+½)Γ(b+½)Γ(c+½)/Γ(a+b+c+3/2)
        use crate::special::gamma;
        let q = SphereQuadrature::gauss(5).unwrap();
        let vals = q.sample(&|t| {
            let c = t.components();
            c[0].powi(2) * c[1].powi(2) * c[2].powi(4)
        });
        let exact = 2.0 * gamma(1.5) * gamma(1.5) * gamma(2.5) / gamma(5.5);
        assert!((q.integrate(&vals) - exact).abs() < 1e-14);
    }
}
