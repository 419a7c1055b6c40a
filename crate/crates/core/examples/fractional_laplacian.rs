//! Plane fractional Laplacian: pointwise quadrature, FFT pipeline and the Bessel-potential identity.
use prte::fracop::{bessel_identity_residual, frac_lap_pointwise, PlaneGrid};
use prte::geom::Dim;
use prte::kernels::bessel_constant;

fn main() -> prte::error::Result<()> {
    let dim = Dim::THREE;
    let s = 0.5;
    let p = 2.0 - 2.0 * s;
    let profile = |v: &[f64]| (1.0 + v[0] * v[0] + v[1] * v[1]).powf(-0.5 * p);
    let cb = bessel_constant(dim, s)?;
    for r in [0.0f64, 0.5, 1.0, 2.0] {
        let v = [r, 0.0];
        let exact = cb * (1.0 + r * r).powf(-0.5 * (2.0 + 2.0 * s));
        let q = frac_lap_pointwise(&profile, &v, s, 1.0);
        println!("|v| = {r:3.1}: quadrature {q:.10}  closed form {exact:.10}");
    }
    let grid = PlaneGrid::new(dim, 8.0, 256)?;
    println!("grid residual of the identity: {:.3e}", bessel_identity_residual(grid, s)?);
    Ok(())
}
