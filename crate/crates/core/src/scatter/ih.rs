use super::sphere::SphereQuadrature;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;

/// I_h(u)(θ_i) = Σ_j w_j (u_j − u_i) h(θ_i·θ_j) for node values u. The bound
/// ‖I_h(u)‖₂ ≤ 2 ‖h‖_{L¹} ‖u‖₂ is checked on the result.
pub fn apply_i_h(u: &[f64], quad: &SphereQuadrature, spec: &KernelSpec) -> Result<Vec<f64>> {
    if spec.remainder.is_zero() {
        return Ok(vec![0.0; u.len()]);
    }
    let nodes = quad.nodes();
    let w = quad.weights();
    let out: Vec<f64> = (0..nodes.len())
        .map(|i| {
            (0..nodes.len())
                .map(|j| w[j] * (u[j] - u[i]) * spec.remainder.eval(nodes[i].dot(&nodes[j])))
                .sum()
        })
        .collect();
    let lhs = quad.norm(&out);
    let rhs = 2.0 * spec.h_l1 * quad.norm(u);
    if lhs > rhs * (1.0 + 1e-9) + 1e-300 {
        return Err(Error::InvariantViolation(format!("remainder bound: {lhs} > {rhs}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Dim;
    use crate::kernels::Remainder;

    #[test]
    fn constants_and_zero_remainder() {
        let q = SphereQuadrature::gauss(6).unwrap();
        let spec = KernelSpec::new(Dim::THREE, 0.5, 1.0, Remainder::Polynomial(vec![1.0, 0.5])).unwrap();
        let out = apply_i_h(&vec![2.0; q.len()], &q, &spec).unwrap();
        assert!(out.iter().all(|x| x.abs() < 1e-13));
        let pure = KernelSpec::pure(Dim::THREE, 0.5, 1.0).unwrap();
        let u = q.sample(&|t| t.components()[0]);
        assert!(apply_i_h(&u, &q, &pure).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn degree_one_eigenvalue() {
        // h = 1 + z on S²: I_h(θ_3) = −8π/3 θ_3
        let q = SphereQuadrature::gauss(6).unwrap();
        let spec = KernelSpec::new(Dim::THREE, 0.5, 0.0, Remainder::Polynomial(vec![1.0, 1.0])).unwrap();
        let u = q.sample(&|t| t.last());
        let out = apply_i_h(&u, &q, &spec).unwrap();
        for (o, x) in out.iter().zip(&u) {
            assert!((o + 8.0 * std::f64::consts::PI / 3.0 * x).abs() < 1e-12);
        }
    }
}
