use crate::error::{out_of_range, Error, Result};
use crate::geom::{Dim, Direction};
use crate::scatter::SphereQuadrature;
use std::io::{Read, Write};
use std::path::Path;

/// Periodic box [−X/2, X/2)^d with m nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    dim: Dim,
    box_size: f64,
    m: usize,
}

impl SpatialGrid {
    pub fn new(dim: Dim, box_size: f64, m: usize) -> Result<SpatialGrid> {
        if !(box_size > 0.0 && box_size.is_finite()) {
            return Err(out_of_range(format!("box size must be positive, got {box_size}")));
        }
        if m < 4 || !m.is_power_of_two() {
            return Err(out_of_range(format!("points per axis must be a power of two ≥ 4, got {m}")));
        }
        Ok(SpatialGrid { dim, box_size, m })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn box_size(&self) -> f64 {
        self.box_size
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spacing(&self) -> f64 {
        self.box_size / self.m as f64
    }

    /// Volume element h^d.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dim.d() as i32)
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim.d() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.m; self.dim.d()]
    }

    /// Coordinates of flat node k (row-major, last axis fastest).
    pub fn point(&self, k: usize) -> [f64; 3] {
        let h = self.spacing();
        let mut p = [0.0; 3];
        let mut r = k;
        for axis in (0..self.dim.d()).rev() {
            p[axis] = -0.5 * self.box_size + (r % self.m) as f64 * h;
            r /= self.m;
        }
        p
    }
}

/// u(x_k, θ_j) stored x-major: values[k · N + j].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    pub spatial: SpatialGrid,
    pub angular: SphereQuadrature,
    pub values: Vec<f64>,
    pub time: f64,
}

impl PhaseField {
    pub fn new(spatial: SpatialGrid, angular: SphereQuadrature, values: Vec<f64>, time: f64) -> Result<PhaseField> {
        if spatial.dim() != angular.dim() {
            return Err(out_of_range("spatial and angular dimensions differ"));
        }
        if values.len() != spatial.len() * angular.len() {
            return Err(out_of_range("value count does not match the grids"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure("non-finite phase-space value".into()));
        }
        Ok(PhaseField { spatial, angular, values, time })
    }

    pub fn from_fn(spatial: SpatialGrid, angular: SphereQuadrature, f: impl Fn(&[f64], &Direction) -> f64) -> Result<PhaseField> {
        let d = spatial.dim().d();
        let mut values = Vec::with_capacity(spatial.len() * angular.len());
        for k in 0..spatial.len() {
            let x = spatial.point(k);
            for t in angular.nodes() {
                values.push(f(&x[..d], t));
            }
        }
        PhaseField::new(spatial, angular, values, 0.0)
    }

    pub fn angular_len(&self) -> usize {
        self.angular.len()
    }

    /// Angular values at spatial node k.
    pub fn at(&self, k: usize) -> &[f64] {
        let n = self.angular.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn mass(&self) -> f64 {
        let w = self.angular.weights();
        let mut acc = 0.0;
        for k in 0..self.spatial.len() {
            acc += self.at(k).iter().zip(w).map(|(u, w)| u * w).sum::<f64>();
        }
        acc * self.spatial.cell()
    }

    pub fn l2_sq(&self) -> f64 {
        let w = self.angular.weights();
        let mut acc = 0.0;
        for k in 0..self.spatial.len() {
            acc += self.at(k).iter().zip(w).map(|(u, w)| u * u * w).sum::<f64>();
        }
        acc * self.spatial.cell()
    }

    pub fn l2(&self) -> f64 {
        self.l2_sq().sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// ρ(x) = ∫ u(x, θ) dθ.
    pub fn density(&self) -> Vec<f64> {
        let w = self.angular.weights();
        (0..self.spatial.len()).map(|k| self.at(k).iter().zip(w).map(|(u, w)| u * w).sum()).collect()
    }

    /// L² distance, normalized by ‖other‖.
    pub fn relative_distance(&self, other: &PhaseField) -> f64 {
        let w = self.angular.weights();
        let n = self.angular.len();
        let mut num = 0.0;
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            num += w[i % n] * (a - b) * (a - b);
        }
        (num * self.spatial.cell()).sqrt() / other.l2().max(f64::MIN_POSITIVE)
    }
}

const MAGIC: &[u8; 4] = b"PRTE";
const VERSION: u32 = 1;

/// Header plus little-endian f64 payload.
pub fn write_snapshot(path: &Path, u: &PhaseField) -> Result<()> {
    let mut buf = Vec::with_capacity(28 + 8 * u.values.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(u.spatial.dim().d() as u32).to_le_bytes());
    buf.extend_from_slice(&(u.spatial.m() as u32).to_le_bytes());
    buf.extend_from_slice(&(u.angular.len() as u32).to_le_bytes());
    buf.extend_from_slice(&u.time.to_le_bytes());
    for v in &u.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

/// Raw snapshot contents: (d, m, angular count, time, values).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub d: u32,
    pub m: u32,
    pub angular: u32,
    pub time: f64,
    pub values: Vec<f64>,
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut buf = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut buf)?;
    let bad = |what: &str| Error::Io(format!("{}: {what}", path.display()));
    if buf.len() < 28 || &buf[..4] != MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    if u32_at(4) != VERSION {
        return Err(bad("unsupported version"));
    }
    let (d, m, angular) = (u32_at(8), u32_at(12), u32_at(16));
    let time = f64::from_le_bytes(buf[20..28].try_into().unwrap());
    let count = (m as usize).pow(d) * angular as usize;
    if buf.len() != 28 + 8 * count {
        return Err(bad("payload length does not match header"));
    }
    let values = buf[28..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(Snapshot { d, m, angular, time, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let g = SpatialGrid::new(Dim::TWO, 4.0, 8).unwrap();
        let q = SphereQuadrature::circle(6).unwrap();
        let mut u = PhaseField::from_fn(g, q, |x, t| x[0] + 2.0 * x[1] * t.components()[0]).unwrap();
        u.time = 0.75;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.bin");
        write_snapshot(&p, &u).unwrap();
        let s = read_snapshot(&p).unwrap();
        assert_eq!((s.d, s.m, s.angular, s.time), (2, 8, 6, 0.75));
        assert_eq!(s.values, u.values);
        let raw = std::fs::read(&p).unwrap();
        assert_eq!(&raw[..4], b"PRTE");
    }

    #[test]
    fn grid_points() {
        let g = SpatialGrid::new(Dim::THREE, 2.0, 4).unwrap();
        assert_eq!(g.point(0), [-1.0, -1.0, -1.0]);
        assert_eq!(g.point(1), [-1.0, -1.0, -0.5]);
        assert_eq!(g.point(4), [-1.0, -0.5, -1.0]);
        assert!(SpatialGrid::new(Dim::TWO, 2.0, 6).is_err());
    }
}
