//! The weak pairing ⟨I(u), ψ⟩ as ε → 0, compared with the spectral value.
use prte::geom::{Dim, Direction};
use prte::kernels::{Kernel, KernelSpec, Remainder};
use prte::scatter::{funk_hecke_eigs, weak_pairing_limit};
use std::f64::consts::PI;

fn main() -> prte::error::Result<()> {
    let dim = Dim::TWO;
    let kernel = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::None)?);
    let l = 2;
    let mode = |t: &Direction| (l as f64 * t.components()[1].atan2(t.components()[0])).cos();
    let limit = weak_pairing_limit(&mode, &mode, &kernel, 8)?;
    for (eps, w) in &limit.ladder {
        println!("ε = {eps:.3e}: W_ε = {w:.10}");
    }
    // ‖cos(lφ)‖² = π on the circle
    let exact = funk_hecke_eigs(&kernel, l)?.get(l) * PI;
    println!("extrapolated {:.10}  spectral {exact:.10}  spread {:.2e}", limit.value, limit.spread);
    Ok(())
}
