use prte::experiments::default_run_setup;
use prte::fracop::PlaneGrid;
use prte::geom::Dim;
use prte::kernels::{Kernel, KernelSpec, Remainder};
use prte::scatter::{funk_hecke_eigs, SphereQuadrature};
use prte::solver::{make_initial, run, Backend, InitialKind, InitialParams, PhaseField, SolverConfig, SpatialGrid};
use prte::error::Error;

fn small_projected(dt: f64) -> (SolverConfig, PhaseField) {
    let dim = Dim::TWO;
    let k = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::Constant(0.1)).unwrap());
    let spatial = SpatialGrid::new(dim, 8.0, 16).unwrap();
    let angular = SphereQuadrature::circle(32).unwrap();
    let p = InitialParams { sigma: 0.8, kappa: 2.0, ..Default::default() };
    let u0 = make_initial(InitialKind::GaussianBeam, &p, spatial, angular).unwrap();
    let mut cfg = SolverConfig::new(k, dt, 0.5, 15);
    cfg.backend = Backend::ProjectedPlane;
    cfg.plane = Some(PlaneGrid::new(dim, 8.0, 2048).unwrap());
    (cfg, u0)
}

#[test]
fn spectral_and_projected_agree() {
    let (cfg, u0) = small_projected(0.01);
    let projected = run(&cfg, &u0).unwrap().final_state;
    let spectral = run(&SolverConfig { backend: Backend::SphereSpectral, ..cfg }, &u0).unwrap().final_state;
    let rel = projected.relative_distance(&spectral);
    assert!(rel <= 0.02, "relative L² gap {rel:e}");
}

#[test]
fn projected_dt_above_bound_is_rejected() {
    let (cfg, u0) = small_projected(0.01);
    assert!(matches!(run(&SolverConfig { dt: 0.5, ..cfg }, &u0), Err(Error::StabilityViolation(_))));
}

#[test]
fn strang_error_quarters_when_dt_halves() {
    let (cfg, u0) = small_projected(0.01);
    let cfg = SolverConfig { backend: Backend::SphereSpectral, plane: None, t_end: 0.8, ..cfg };
    let at = |dt: f64| run(&SolverConfig { dt, ..cfg.clone() }, &u0).unwrap().final_state;
    let reference = at(0.1 / 8.0);
    let e1 = at(0.1).relative_distance(&reference);
    let e2 = at(0.05).relative_distance(&reference);
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() <= 0.8, "error ratio {ratio}");
}

#[test]
fn anisotropy_decays_at_first_eigenvalue() {
    let dim = Dim::THREE;
    let spec = KernelSpec::new(dim, 0.5, 1.0, Remainder::Polynomial(vec![0.2, 0.1])).unwrap();
    let k = Kernel::Limiting(spec);
    let spatial = SpatialGrid::new(dim, 4.0, 4).unwrap();
    let angular = SphereQuadrature::gauss(8).unwrap();
    let u0 = PhaseField::from_fn(spatial, angular, |_, t| 1.0 + 0.5 * t.last()).unwrap();
    let t_end = 0.6;
    let out = run(&SolverConfig::new(k.clone(), 0.05, t_end, 7), &u0).unwrap();
    let anisotropy = |u: &PhaseField| {
        let n = u.angular.len();
        let area: f64 = u.angular.weights().iter().sum();
        let mut sq = 0.0;
        for x in 0..u.spatial.len() {
            let v = &u.values[x * n..(x + 1) * n];
            let mean = u.angular.integrate(v) / area;
            let dev: Vec<f64> = v.iter().map(|y| y - mean).collect();
            sq += u.angular.dot(&dev, &dev);
        }
        sq.sqrt()
    };
    let ratio = anisotropy(&out.final_state) / anisotropy(&u0);
    let expected = (funk_hecke_eigs(&k, 1).unwrap().get(1) * t_end).exp();
    assert!((ratio / expected - 1.0).abs() <= 0.05, "ratio {ratio} vs {expected}");
}

#[test]
fn uniform_isotropic_state_is_stationary() {
    let dim = Dim::TWO;
    let k = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::Constant(0.1)).unwrap());
    let u0 = PhaseField::from_fn(SpatialGrid::new(dim, 8.0, 16).unwrap(), SphereQuadrature::circle(32).unwrap(), |_, _| 0.7).unwrap();
    let out = run(&SolverConfig::new(k, 0.1, 1.0, 15), &u0).unwrap();
    let worst = out.final_state.values.iter().map(|v| (v - 0.7).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-12, "{worst:e}");
    assert!(out.diagnostics.iter().all(|r| (r.l2 - out.diagnostics[0].l2).abs() <= 1e-12 * r.l2));
}

#[test]
fn negative_initial_data_is_an_invariant_violation() {
    let spatial = SpatialGrid::new(Dim::TWO, 8.0, 8).unwrap();
    let angular = SphereQuadrature::circle(16).unwrap();
    let p = InitialParams { perturbation: 2.0, ..Default::default() };
    let u0 = make_initial(InitialKind::HarmonicPerturbation, &p, spatial, angular).unwrap();
    let k = Kernel::Limiting(KernelSpec::pure(Dim::TWO, 0.25, 1.0).unwrap());
    assert!(matches!(run(&SolverConfig::new(k, 0.1, 0.2, 7), &u0), Err(Error::InvariantViolation(_))));
}

#[test]
fn runs_are_identical_across_thread_counts() {
    for backend in [Backend::SphereSpectral, Backend::ProjectedPlane] {
        let (cfg, u0) = small_projected(0.05);
        let cfg = SolverConfig { backend, t_end: 0.2, ..cfg };
        let go = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run(&cfg, &u0).unwrap())
        };
        let (a, b) = (go(1), go(4));
        assert_eq!(a.final_state.values, b.final_state.values, "{backend:?}");
        assert_eq!(a.diagnostics, b.diagnostics, "{backend:?}");
    }
}

#[test]
fn default_run_conserves_mass_and_dissipates() {
    let setup = default_run_setup().unwrap();
    let out = run(&setup.cfg, &setup.u0).unwrap();
    let m0 = out.diagnostics[0].mass;
    for pair in out.diagnostics.windows(2) {
        assert!((pair[1].mass - m0).abs() <= 1e-8 * m0);
        assert!(pair[1].l2 <= pair[0].l2 * (1.0 + 1e-10));
        assert!(pair[1].energy_residual >= -1e-6 * pair[0].l2.powi(2));
    }
}
