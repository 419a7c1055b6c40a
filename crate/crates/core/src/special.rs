//! Special functions not covered by `statrs`: Hurwitz zeta, Dirichlet beta
//! and the Epstein zeta of the square lattices Z and Z².

pub use statrs::function::gamma::{gamma, ln_gamma};

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Hurwitz zeta ζ(s, a) = Σ_k (k+a)^{-s} for real s ≠ 1 and a > 0, analytically
/// continued in s. Euler–Maclaurin with 24 explicit terms.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(a > 0.0, "hurwitz_zeta needs a > 0");
    assert!((s - 1.0).abs() > 1e-12, "pole at s = 1");
    const N: usize = 24;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (k as f64 + a).powf(-s);
    }
    let x = N as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * x^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut xp = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b / fact * rising * xp;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        xp /= x * x;
    }
    sum
}

/// Riemann zeta for real s ≠ 1.
pub fn zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// Dirichlet beta β(s) = Σ (-1)^k (2k+1)^{-s}.
pub fn dirichlet_beta(s: f64) -> f64 {
    4f64.powf(-s) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75))
}

/// Epstein zeta Σ_{j ∈ Z^n \ 0} |j|^{-p} of the integer lattice (n = 1, 2),
/// continued analytically in p.
pub fn lattice_zeta(n: usize, p: f64) -> f64 {
    match n {
        1 => 2.0 * zeta(p),
        2 => 4.0 * zeta(p / 2.0) * dirichlet_beta(p / 2.0),
        _ => panic!("lattice_zeta only for n = 1, 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(-1.0) + 1.0 / 12.0).abs() < 1e-13);
        assert!((zeta(0.5) + 1.4603545088095868).abs() < 1e-12);
        assert!((zeta(0.0) + 0.5).abs() < 1e-13);
    }

    #[test]
    fn beta_known_values() {
        // Catalan's constant
        assert!((dirichlet_beta(2.0) - 0.915_965_594_177_219).abs() < 1e-13);
        assert!((dirichlet_beta(1.0 + 1e-9) - PI / 4.0).abs() < 1e-8);
    }

    #[test]
    fn lattice_zeta_direct_sum() {
        // p = 5: the direct sum converges fast enough to check
        let mut direct = 0.0;
        let k = 400i64;
        for i in -k..=k {
            for j in -k..=k {
                if i != 0 || j != 0 {
                    direct += ((i * i + j * j) as f64).powf(-2.5);
                }
            }
        }
        // tail beyond the square: ~ 2π ∫_k^∞ r^{-4} dr
        direct += 2.0 * PI / (3.0 * (k as f64).powi(3));
        assert!((lattice_zeta(2, 5.0) - direct).abs() < 1e-6);
    }
}
