//! The collision operator evaluated through the stereographic plane, checked on spherical harmonics.
use prte::geom::{Dim, Direction};
use prte::kernels::{Kernel, KernelSpec, Remainder};
use prte::scatter::{funk_hecke_eigs, ProjectedScatter};

fn main() -> prte::error::Result<()> {
    let dim = Dim::TWO;
    let kernel = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::Constant(0.1))?);
    let eigs = funk_hecke_eigs(&kernel, 8)?;
    let op = ProjectedScatter::new(kernel, 8)?;
    let dirs: Vec<Direction> = (0..5)
        .map(|i| {
            let a = 0.3 + 1.1 * i as f64;
            Direction::new(dim, &[a.cos(), a.sin()])
        })
        .collect::<Result<_, _>>()?;
    for l in [1usize, 3, 6] {
        let mode = move |t: &Direction| (l as f64 * t.components()[1].atan2(t.components()[0])).cos();
        let out = op.apply_at(&mode, &dirs)?;
        let worst = dirs
            .iter()
            .zip(&out)
            .map(|(t, y)| (y - eigs.get(l) * mode(t)).abs())
            .fold(0.0, f64::max);
        println!("l = {l}: λ_l = {:.8}, max |I(Y) − λ_l Y| = {worst:.2e}", eigs.get(l));
    }
    Ok(())
}
