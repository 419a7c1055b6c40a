//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi (Golub–Welsch),
//! composite graded panels, and an adaptive Gauss–Kronrod integrator.

use crate::error::{Error, Result};
use crate::special::ln_gamma;
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a rule on [-1, 1] (or on whatever interval it was mapped to).
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Affine map of a rule on [-1, 1] onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Concatenation of several rules (composite rule).
    pub fn concat(parts: impl IntoIterator<Item = Rule>) -> Rule {
        let mut out = Rule { nodes: vec![], weights: vec![] };
        for p in parts {
            out.nodes.extend(p.nodes);
            out.weights.extend(p.weights);
        }
        out
    }
}

/// n-point Gauss–Legendre rule on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// n-point Gauss–Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1],
/// via the eigen-decomposition of the Jacobi matrix.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    if n == 0 || alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::ParameterOutOfRange(format!(
            "gauss_jacobi needs n > 0, alpha, beta > -1 (got {n}, {alpha}, {beta})"
        )));
    }
    let ab = alpha + beta;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        j[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let c = 2.0 * m + ab;
            let off = if k == 0 {
                // the general formula is 0/0 when alpha + beta = -1
                (4.0 * (1.0 + alpha) * (1.0 + beta) / (c * c * (c + 1.0))).sqrt()
            } else {
                (4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (c * c * (c + 1.0) * (c - 1.0))).sqrt()
            };
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Panel breakpoints on [a, b] refined geometrically toward `a`: the first panel
/// has width `smallest`, then widths grow by `ratio` until they reach `max_width`,
/// after which panels are uniform.
pub fn graded_breakpoints(a: f64, b: f64, smallest: f64, ratio: f64, max_width: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut w = smallest.min(b - a);
    let mut x = a;
    while x < b {
        let step = w.min(max_width);
        let next = if x + step * 1.5 >= b { b } else { x + step };
        pts.push(next);
        x = next;
        w *= ratio;
    }
    pts
}

/// Composite Gauss–Legendre rule with `order` points on each panel between breakpoints.
pub fn composite(breaks: &[f64], order: usize) -> Rule {
    let base = gauss_legendre(order);
    Rule::concat(breaks.windows(2).map(|w| base.mapped(w[0], w[1])))
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod integration of f over [a, b] to absolute tolerance `tol`.
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    #[derive(PartialEq)]
    struct Piece(f64, f64, f64, f64); // err, lo, hi, val
    impl Eq for Piece {}
    impl PartialOrd for Piece {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Piece {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0)
        }
    }
    let mut heap = std::collections::BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    let mut total_err = e;
    heap.push(Piece(e, a, b, v));
    let mut pieces = 1usize;
    while total_err > tol {
        let Piece(e, lo, hi, _) = heap.pop().expect("nonempty");
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || pieces > 200_000 {
            return Err(Error::QuadratureNonConvergence(format!(
                "adaptive quadrature stalled near {lo} (error estimate {total_err:e})"
            )));
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        total_err += e1 + e2 - e;
        heap.push(Piece(e1, lo, mid, v1));
        heap.push(Piece(e2, mid, hi, v2));
        pieces += 1;
    }
    // sum in position order so the result does not depend on heap layout
    let mut parts: Vec<Piece> = heap.into_vec();
    parts.sort_by(|x, y| x.1.total_cmp(&y.1));
    Ok(parts.iter().map(|p| p.3).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = gauss_legendre(6);
        for k in 0..12 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((r.integrate(|x| x.powi(k)) - exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn jacobi_weight_moments() {
        // ∫_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
        for &(a, b) in &[(-0.25, 0.0), (-0.5, -0.5), (0.5, -0.75), (-0.9, 0.3)] {
            let r = gauss_jacobi(12, a, b).unwrap();
            let exact = ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
                - ln_gamma(a + b + 2.0))
            .exp();
            assert!((r.integrate(|_| 1.0) - exact).abs() < 1e-13 * exact);
            // first moment: ∫x w = exact * (b - a)/(a + b + 2)
            let m1 = exact * (b - a) / (a + b + 2.0);
            assert!((r.integrate(|x| x) - m1).abs() < 1e-13);
        }
    }

    #[test]
    fn chebyshev_nodes_from_jacobi() {
        let n = 7;
        let r = gauss_jacobi(n, -0.5, -0.5).unwrap();
        for (i, x) in r.nodes.iter().enumerate() {
            let expect = -(std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos();
            assert!((x - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let v = adaptive(&|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn graded_breaks_cover_interval() {
        let b = graded_breakpoints(0.0, 3.0, 1e-6, 2.0, 0.5);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 3.0);
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        let r = composite(&b, 10);
        assert!((r.integrate(|x| x * x) - 9.0).abs() < 1e-12);
    }
}
