//! Funk–Hecke eigenvalues of the limiting kernel and of Henyey–Greenstein kernels.
use prte::geom::Dim;
use prte::kernels::{HGSpec, Kernel, KernelSpec, Remainder};
use prte::scatter::funk_hecke_eigs;

fn main() -> prte::error::Result<()> {
    let dim = Dim::THREE;
    let spec = KernelSpec::new(dim, 0.5, HGSpec::canonical_b1(dim, 0.5), Remainder::None)?;
    let lmax = 12;
    let limiting = funk_hecke_eigs(&Kernel::Limiting(spec.clone()), lmax)?;
    let hg: Vec<_> = [0.9, 0.99]
        .iter()
        .map(|&g| funk_hecke_eigs(&Kernel::HenyeyGreenstein(HGSpec::new(spec.clone(), g)?), lmax))
        .collect::<Result<_, _>>()?;
    println!("{:>3} {:>14} {:>14} {:>14}", "l", "limiting", "HG g=0.9", "HG g=0.99");
    for l in 0..=lmax {
        println!("{l:>3} {:>14.6} {:>14.6} {:>14.6}", limiting.get(l), hg[0].get(l), hg[1].get(l));
    }
    println!("monotone: {}", limiting.is_monotone());
    Ok(())
}
