use prte::experiments::{parse_csv, StudyReport};
use prte::fracop::{frac_lap_spectral, PlaneField, PlaneGrid};
use prte::geom::{chord_gap, project, unproject, Dim, PlanePoint};
use prte::kernels::{Kernel, KernelSpec, Remainder};
use prte::scatter::SphereQuadrature;
use prte::solver::{read_snapshot, strang_step, transport_step, write_snapshot, PhaseField, SolverConfig, SpatialGrid};
use proptest::prelude::*;

fn plane_point(dim: Dim, c: &[f64]) -> PlanePoint {
    PlanePoint::new(dim, &c[..dim.n()]).unwrap()
}

fn dims() -> impl Strategy<Value = Dim> {
    prop_oneof![Just(Dim::TWO), Just(Dim::THREE)]
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0..20.0f64, 2)
}

/// Smooth rapidly decaying fields on a 64² periodic grid built from random Gaussian bumps.
fn bump_field(grid: PlaneGrid, p: &[f64]) -> PlaneField {
    PlaneField::from_fn(grid, |x| {
        p.chunks(3)
            .map(|c| c[0] * (-((x[0] - c[1]).powi(2) + (x[1] - c[2]).powi(2)) / 0.8).exp())
            .sum()
    })
}

fn bump_params() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5..1.5f64, 6)
}

fn random_field(dim: Dim, seed: &[f64]) -> PhaseField {
    let spatial = SpatialGrid::new(dim, 6.0, 8).unwrap();
    let angular = SphereQuadrature::for_dim(dim, if dim.d() == 2 { 16 } else { 6 }).unwrap();
    PhaseField::from_fn(spatial, angular, |x, t| {
        let c = t.components();
        // integer wavenumbers keep the data periodic and free of Nyquist content
        let phase: f64 = x.iter().zip([1.0, 2.0, 1.0]).map(|(xi, k)| k * xi).sum::<f64>() * std::f64::consts::TAU / 6.0 + seed[0];
        (1.0 + 0.5 * seed[1] * phase.sin()) * (1.0 + 0.4 * seed[2] * c[0] + 0.3 * c[1] * c[1])
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chord_identity_holds(dim in dims(), a in coords(), b in coords()) {
        let (v, w) = (plane_point(dim, &a), plane_point(dim, &b));
        let direct = 1.0 - unproject(&v).dot(&unproject(&w));
        let gap = chord_gap(&v, &w);
        prop_assert!((direct - gap).abs() <= 1e-12 * (1.0 + gap));
    }

    #[test]
    fn stereographic_round_trip(dim in dims(), a in coords()) {
        let v = plane_point(dim, &a);
        let back = project(&unproject(&v)).unwrap();
        for (x, y) in v.components().iter().zip(back.components()) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn fractional_laplacian_is_linear_symmetric_positive(p in bump_params(), q in bump_params(), alpha in -2.0..2.0f64, s in 0.05..0.95f64) {
        let grid = PlaneGrid::new(Dim::THREE, 8.0, 64).unwrap();
        let (f, g) = (bump_field(grid, &p), bump_field(grid, &q));
        let (af, ag) = (frac_lap_spectral(&f, s), frac_lap_spectral(&g, s));
        let combo = PlaneField::new(grid, f.values.iter().zip(&g.values).map(|(x, y)| x + alpha * y).collect()).unwrap();
        let ac = frac_lap_spectral(&combo, s);
        let scale = af.max_abs() + alpha.abs() * ag.max_abs() + 1e-12;
        for i in 0..ac.values.len() {
            prop_assert!((ac.values[i] - af.values[i] - alpha * ag.values[i]).abs() <= 1e-12 * scale);
        }
        let (fg, gf) = (af.dot(&g), ag.dot(&f));
        prop_assert!((fg - gf).abs() <= 1e-10 * (fg.abs() + gf.abs() + 1e-12));
        prop_assert!(af.dot(&f) >= -1e-12);
    }

    #[test]
    fn transport_preserves_mass_and_l2(dim in dims(), seed in prop::collection::vec(-1.5..1.5f64, 3), dt in 0.0..3.0f64) {
        let u = random_field(dim, &seed);
        let v = transport_step(&u, dt);
        prop_assert!((v.mass() - u.mass()).abs() <= 1e-12 * u.mass().abs());
        prop_assert!((v.l2() - u.l2()).abs() <= 1e-12 * u.l2());
    }

    #[test]
    fn strang_step_conserves_mass_and_dissipates(seed in prop::collection::vec(-1.5..1.5f64, 3), c in 0.0..0.5f64, dt in 0.01..0.5f64) {
        let dim = Dim::TWO;
        let u = random_field(dim, &seed);
        let k = Kernel::Limiting(KernelSpec::new(dim, 0.25, 1.0, Remainder::Constant(c)).unwrap());
        let v = strang_step(&u, &SolverConfig::new(k, dt, dt, 7)).unwrap();
        prop_assert!((v.mass() - u.mass()).abs() <= 1e-10 * u.mass().abs());
        prop_assert!(v.l2() <= u.l2() * (1.0 + 1e-12));
    }

    #[test]
    fn snapshot_round_trip(dim in dims(), seed in prop::collection::vec(-1.5..1.5f64, 3), time in 0.0..100.0f64) {
        let mut u = random_field(dim, &seed);
        u.time = time;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        write_snapshot(&path, &u).unwrap();
        let s = read_snapshot(&path).unwrap();
        prop_assert_eq!(s.d as usize, dim.d());
        prop_assert_eq!(s.time, time);
        prop_assert_eq!(s.values, u.values);
    }

    #[test]
    fn report_csv_round_trip(rows in prop::collection::vec(prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 3), 0..20)) {
        let mut r = StudyReport::new("prop", &["x", "y", "z"]);
        r.rows = rows.clone();
        let (header, parsed) = parse_csv(&r.csv()).unwrap();
        prop_assert_eq!(header, vec!["x", "y", "z"]);
        prop_assert_eq!(parsed, rows);
    }
}
