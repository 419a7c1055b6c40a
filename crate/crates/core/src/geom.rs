//! Stereographic projection between S^{d-1} and R^{d-1}.
//!
//! The projection is taken from the north pole (0,…,0,1), so the south pole
//! lands on the origin of the plane.

use crate::error::{out_of_range, Error, Result};
use std::f64::consts::PI;

const POLE_TOL: f64 = 1e-12;

/// Ambient dimension d ∈ {2, 3}. The sphere is S^{d-1}, the plane R^{d-1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim(usize);

impl Dim {
    pub fn new(d: usize) -> Result<Dim> {
        match d {
            2 | 3 => Ok(Dim(d)),
            _ => Err(out_of_range(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub const TWO: Dim = Dim(2);
    pub const THREE: Dim = Dim(3);

    pub fn d(self) -> usize {
        self.0
    }

    /// Dimension of the projected plane, n = d - 1.
    pub fn n(self) -> usize {
        self.0 - 1
    }

    /// |S^{d-1}|
    pub fn sphere_area(self) -> f64 {
        if self.0 == 2 { 2.0 * PI } else { 4.0 * PI }
    }

    /// |S^{d-2}|: 2 points for d = 2, the unit circle for d = 3.
    pub fn equator_area(self) -> f64 {
        if self.0 == 2 { 2.0 } else { 2.0 * PI }
    }
}

/// Unit vector θ ∈ S^{d-1}. Unused trailing components are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    dim: Dim,
    c: [f64; 3],
}

impl Direction {
    /// Normalizes `c` (which must be nonzero).
    pub fn new(dim: Dim, c: &[f64]) -> Result<Direction> {
        if c.len() != dim.d() {
            return Err(out_of_range("direction has wrong number of components"));
        }
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(out_of_range("direction must be a finite nonzero vector"));
        }
        let mut a = [0.0; 3];
        for (o, x) in a.iter_mut().zip(c) {
            *o = x / norm;
        }
        Ok(Direction { dim, c: a })
    }

    pub(crate) fn raw(dim: Dim, c: [f64; 3]) -> Direction {
        Direction { dim, c }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.c[..self.dim.d()]
    }

    /// Last component θ_d.
    pub fn last(&self) -> f64 {
        self.c[self.dim.d() - 1]
    }

    pub fn dot(&self, o: &Direction) -> f64 {
        self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2]
    }

    /// Reflection θ_d → −θ_d, which swaps the two stereographic charts.
    pub fn reflect(&self) -> Direction {
        let mut c = self.c;
        c[self.dim.d() - 1] = -c[self.dim.d() - 1];
        Direction { dim: self.dim, c }
    }
}

/// Point v ∈ R^{d-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    dim: Dim,
    c: [f64; 2],
}

impl PlanePoint {
    pub fn new(dim: Dim, c: &[f64]) -> Result<PlanePoint> {
        if c.len() != dim.n() {
            return Err(out_of_range("plane point has wrong number of components"));
        }
        let mut a = [0.0; 2];
        a[..c.len()].copy_from_slice(c);
        Ok(PlanePoint { dim, c: a })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.c[..self.dim.n()]
    }

    pub fn norm_sq(&self) -> f64 {
        self.c[0] * self.c[0] + self.c[1] * self.c[1]
    }

    /// ⟨v⟩ = √(1 + |v|²)
    pub fn bracket(&self) -> f64 {
        (1.0 + self.norm_sq()).sqrt()
    }
}

/// S(θ)_i = θ_i / (1 − θ_d).
pub fn project(theta: &Direction) -> Result<PlanePoint> {
    let gap = 1.0 - theta.last();
    if gap.abs() <= POLE_TOL {
        return Err(Error::NorthPoleSingularity(gap.abs()));
    }
    let n = theta.dim.n();
    let mut c = [0.0; 2];
    for i in 0..n {
        c[i] = theta.c[i] / gap;
    }
    Ok(PlanePoint { dim: theta.dim, c })
}

/// J(v)_i = 2v_i/⟨v⟩², J(v)_d = (|v|² − 1)/⟨v⟩².
pub fn unproject(v: &PlanePoint) -> Direction {
    let r2 = v.norm_sq();
    let b2 = 1.0 + r2;
    let n = v.dim.n();
    let mut c = [0.0; 3];
    for i in 0..n {
        c[i] = 2.0 * v.c[i] / b2;
    }
    c[n] = (r2 - 1.0) / b2;
    Direction { dim: v.dim, c }
}

/// 1 − J(v)·J(v2) written without cancellation: 2|v − v2|²/(⟨v⟩²⟨v2⟩²).
pub fn chord_gap(v: &PlanePoint, v2: &PlanePoint) -> f64 {
    let dx = v.c[0] - v2.c[0];
    let dy = v.c[1] - v2.c[1];
    2.0 * (dx * dx + dy * dy) / ((1.0 + v.norm_sq()) * (1.0 + v2.norm_sq()))
}

/// Surface-measure density dθ/dv = 2^{d-1}/⟨v⟩^{2(d-1)}.
pub fn jacobian_to_sphere(v: &PlanePoint) -> f64 {
    let n = v.dim.n() as i32;
    2f64.powi(n) / (1.0 + v.norm_sq()).powi(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(Dim::THREE, &[x, y]).unwrap()
    }

    #[test]
    fn poles() {
        let south = Direction::new(Dim::THREE, &[0.0, 0.0, -1.0]).unwrap();
        assert_eq!(project(&south).unwrap().components(), &[0.0, 0.0]);
        let north = Direction::new(Dim::THREE, &[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(project(&north), Err(Error::NorthPoleSingularity(_))));
        let eq = Direction::new(Dim::THREE, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(project(&eq).unwrap().components(), &[1.0, 0.0]);
        assert_eq!(unproject(&p3(1.0, 0.0)).components(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn chord_gap_hand_values() {
        assert_eq!(chord_gap(&p3(0.3, -0.2), &p3(0.3, -0.2)), 0.0);
        assert!((chord_gap(&p3(0.0, 0.0), &p3(1.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobian_at_origin() {
        assert_eq!(jacobian_to_sphere(&p3(0.0, 0.0)), 4.0);
        let p2 = PlanePoint::new(Dim::TWO, &[0.0]).unwrap();
        assert_eq!(jacobian_to_sphere(&p2), 2.0);
    }

    #[test]
    fn reflection_inverts_radius() {
        let v = p3(0.6, -1.7);
        let t = unproject(&v).reflect();
        let w = project(&t).unwrap();
        let r2 = v.norm_sq();
        assert!((w.components()[0] - 0.6 / r2).abs() < 1e-14);
        assert!((w.components()[1] + 1.7 / r2).abs() < 1e-14);
    }
}
