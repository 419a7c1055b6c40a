//! Angular discretization and the collision operator I(u)(θ) = ∫ (u(θ′) − u(θ)) b(θ·θ′) dθ′.

mod eigs;
mod harmonics;
mod hs;
mod ih;
mod projected;
mod sphere;
mod weak;

pub use eigs::{apply_scatter_spectral, funk_hecke_eigs, zonal_table, EigenTable};
pub use harmonics::{single_mode, AngularSpectrum, Harmonics, SphereFn, SphereTransform};
pub use sphere::SphereQuadrature;
pub use ih::apply_i_h;
pub use projected::{apply_scatter_projected, ProjectedOutput, ProjectedScatter};
pub use weak::{extrapolate, outer_quadrature, weak_diagonal, weak_matrix, weak_pairing, weak_pairing_limit, WeakLimit, EPS_LADDER};
pub use hs::{hs_multipliers, hs_norm, hs_relation_defect, hs_spectral, sobolev_lower_bound, HsNorms};
