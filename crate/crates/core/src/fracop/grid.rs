use crate::error::{out_of_range, Error, Result};
use crate::geom::Dim;

/// Uniform lattice on [−L, L)^{d−1} with n points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid {
    dim: Dim,
    half_width: f64,
    n: usize,
}

impl PlaneGrid {
    pub fn new(dim: Dim, half_width: f64, n: usize) -> Result<PlaneGrid> {
        if !n.is_power_of_two() || n < 8 {
            return Err(out_of_range(format!("plane grid size must be a power of two >= 8, got {n}")));
        }
        if !(half_width >= 8.0) || !half_width.is_finite() {
            return Err(out_of_range(format!("plane half-width must be >= 8, got {half_width}")));
        }
        let g = PlaneGrid { dim, half_width, n };
        if g.spacing() > 0.5 {
            return Err(out_of_range(format!("plane spacing {} exceeds 0.5", g.spacing())));
        }
        Ok(g)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Number of axes, d − 1.
    pub fn axes(&self) -> usize {
        self.dim.n()
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.axes()]
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Multi-index of a flat (row-major) node index.
    pub fn index(&self, flat: usize) -> [usize; 2] {
        if self.axes() == 1 { [flat, 0] } else { [flat / self.n, flat % self.n] }
    }

    pub fn flat(&self, idx: [usize; 2]) -> usize {
        if self.axes() == 1 { idx[0] } else { idx[0] * self.n + idx[1] }
    }

    /// Coordinates of a node (second entry zero when d = 2).
    pub fn node(&self, flat: usize) -> [f64; 2] {
        let [i, j] = self.index(flat);
        if self.axes() == 1 { [self.coord(i), 0.0] } else { [self.coord(i), self.coord(j)] }
    }

    /// Cell volume h^{d−1}.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.axes() as i32)
    }

    /// Nodes on the outermost ring of the lattice.
    pub fn is_boundary(&self, flat: usize) -> bool {
        let [i, j] = self.index(flat);
        let edge = |k: usize| k == 0 || k == self.n - 1;
        edge(i) || (self.axes() == 2 && edge(j))
    }
}

/// Scalar field on a PlaneGrid.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneField {
    pub grid: PlaneGrid,
    pub values: Vec<f64>,
}

impl PlaneField {
    pub fn new(grid: PlaneGrid, values: Vec<f64>) -> Result<PlaneField> {
        if values.len() != grid.len() {
            return Err(out_of_range("field length does not match grid"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure("plane field has non-finite values".into()));
        }
        Ok(PlaneField { grid, values })
    }

    pub fn from_fn(grid: PlaneGrid, f: impl Fn(&[f64]) -> f64) -> PlaneField {
        let axes = grid.axes();
        let values = (0..grid.len()).map(|k| f(&grid.node(k)[..axes])).collect();
        PlaneField { grid, values }
    }

    pub fn zeros(grid: PlaneGrid) -> PlaneField {
        PlaneField { grid, values: vec![0.0; grid.len()] }
    }

    /// Discrete inner product h^{d−1} Σ f g.
    pub fn dot(&self, o: &PlaneField) -> f64 {
        self.grid.cell() * self.values.iter().zip(&o.values).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// max over the boundary ring divided by max overall.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let b = (0..self.grid.len())
            .filter(|&k| self.grid.is_boundary(k))
            .fold(0.0f64, |m, k| m.max(self.values[k].abs()));
        b / max
    }

    /// 8-point (tensor) Lagrange interpolation; the field is taken as zero
    /// outside the grid.
    pub fn interpolate(&self, p: &[f64]) -> f64 {
        self.interpolate_order(p, 8)
    }

    /// Tensor Lagrange interpolation on `order` points per axis (even, at most 24).
    pub fn interpolate_order(&self, p: &[f64], order: usize) -> f64 {
        const MAX: usize = 24;
        assert!(order.is_multiple_of(2) && (2..=MAX).contains(&order), "interpolation order must be even and ≤ {MAX}");
        let k = order;
        let g = &self.grid;
        let h = g.spacing();
        let mut base = [0i64; 2];
        let mut wts = [[0.0; MAX]; 2];
        for ax in 0..g.axes() {
            let x = (p[ax] + g.half_width()) / h;
            let b = x.floor() as i64 - (k as i64 / 2 - 1);
            base[ax] = b;
            for (j, w) in wts[ax][..k].iter_mut().enumerate() {
                let mut l = 1.0;
                for m in 0..k {
                    if m != j {
                        l *= (x - (b + m as i64) as f64) / (j as f64 - m as f64);
                    }
                }
                *w = l;
            }
        }
        let n = g.n() as i64;
        let inside = |i: i64| (0..n).contains(&i);
        let mut acc = 0.0;
        if g.axes() == 1 {
            for j in 0..k {
                let i = base[0] + j as i64;
                if inside(i) {
                    acc += wts[0][j] * self.values[i as usize];
                }
            }
        } else {
            for a in 0..k {
                let i = base[0] + a as i64;
                if !inside(i) {
                    continue;
                }
                let mut row = 0.0;
                for b in 0..k {
                    let j = base[1] + b as i64;
                    if inside(j) {
                        row += wts[1][b] * self.values[(i * n + j) as usize];
                    }
                }
                acc += wts[0][a] * row;
            }
        }
        acc
    }

    /// Err(BoundaryLeakage) when the field does not vanish on the boundary ring.
    pub fn check_boundary(&self) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > 1e-6 { Err(Error::BoundaryLeakage { ratio }) } else { Ok(()) }
    }
}

fn bracket_sq(v: &[f64]) -> f64 {
    1.0 + v.iter().map(|x| x * x).sum::<f64>()
}

/// w_J = u_J / ⟨v⟩^{d−1−2s}
pub fn to_weighted(u: &PlaneField, s: f64) -> PlaneField {
    reweight(u, -(u.grid.axes() as f64 - 2.0 * s))
}

/// u_J = w_J ⟨v⟩^{d−1−2s}
pub fn from_weighted(w: &PlaneField, s: f64) -> PlaneField {
    reweight(w, w.grid.axes() as f64 - 2.0 * s)
}

fn reweight(f: &PlaneField, power: f64) -> PlaneField {
    let axes = f.grid.axes();
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(k, x)| x * bracket_sq(&f.grid.node(k)[..axes]).powf(0.5 * power))
        .collect();
    PlaneField { grid: f.grid, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(PlaneGrid::new(Dim::THREE, 8.0, 64).is_ok());
        assert!(PlaneGrid::new(Dim::THREE, 8.0, 24).is_err());
        assert!(PlaneGrid::new(Dim::THREE, 4.0, 64).is_err());
        assert!(PlaneGrid::new(Dim::THREE, 64.0, 64).is_err());
    }

    #[test]
    fn weighting_round_trip() {
        let g = PlaneGrid::new(Dim::THREE, 8.0, 32).unwrap();
        let s = 0.3;
        let u = PlaneField::from_fn(g, |v| (v[0] - 0.3 * v[1]).sin());
        let back = from_weighted(&to_weighted(&u, s), s);
        for (a, b) in back.values.iter().zip(&u.values) {
            assert!((a - b).abs() < 1e-14);
        }
        let prof = PlaneField::from_fn(g, |v| bracket_sq(v).powf(0.5 * (2.0 - 2.0 * s)));
        assert!(to_weighted(&prof, s).values.iter().all(|w| (w - 1.0).abs() < 1e-13));
        assert!(to_weighted(&PlaneField::zeros(g), s).values.iter().all(|w| *w == 0.0));
    }
}
