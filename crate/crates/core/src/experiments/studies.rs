use super::report::{fit_power_law, StudyReport};
use super::rho::rho_regularity;
use crate::error::{out_of_range, Error, Result};
use crate::fracop::{approx_normalization, frac_lap_free_space, frac_lap_g_at, frac_lap_g_compact_far, PlaneField};
use crate::kernels::{HGSpec, Kernel};
use crate::solver::{run, PhaseField, RunOutput, SolverConfig};
use rayon::prelude::*;

/// Residual floor for the level-set inequality, relative to ‖u_λ‖² at the interval start.
pub const LEVEL_SET_TOL: f64 = 1e-6;
/// Agreement required between the λ = 0 level set and the energy residual of the run.
pub const MEE_MATCH_TOL: f64 = 1e-12;
/// Smallest decay exponent accepted by the decay study.
pub const DECAY_MIN_EXPONENT: f64 = 0.4;

fn check_ladder(g_ladder: &[f64]) -> Result<()> {
    if g_ladder.len() < 3 {
        return Err(Error::Config(format!("study ladder needs at least 3 points, got {}", g_ladder.len())));
    }
    if g_ladder.iter().any(|g| !(*g > 0.0 && *g < 1.0)) {
        return Err(Error::Config("ladder values of g must lie in (0, 1)".into()));
    }
    if g_ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("ladder values of g must increase".into()));
    }
    Ok(())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// ‖u^g(t_end) − u(t_end)‖ over a ladder of HG kernels built on the limiting
/// kernel of `cfg`.
pub fn hg_convergence_study(cfg: &SolverConfig, u0: &PhaseField, g_ladder: &[f64]) -> Result<StudyReport> {
    check_ladder(g_ladder)?;
    let base = match &cfg.kernel {
        Kernel::Limiting(k) => k.clone(),
        Kernel::HenyeyGreenstein(_) => return Err(Error::Config("hg-convergence needs a limiting kernel".into())),
    };
    let mut quiet = cfg.clone();
    quiet.snapshot_every = 0;
    quiet.levels.clear();
    let reference = run(&quiet, u0)?.final_state;
    let finals: Vec<Result<PhaseField>> = g_ladder
        .par_iter()
        .map(|&g| {
            let mut c = quiet.clone();
            c.kernel = Kernel::HenyeyGreenstein(HGSpec::new(base.clone(), g)?);
            Ok(run(&c, u0)?.final_state)
        })
        .collect();
    let ref_norm = reference.l2();
    let mut errors = Vec::with_capacity(g_ladder.len());
    for f in finals {
        errors.push(f?.relative_distance(&reference) * ref_norm);
    }
    let x: Vec<f64> = g_ladder.iter().map(|g| 1.0 - g).collect();
    let mut rep = StudyReport::new("hg-convergence", &["g", "one_minus_g", "error", "fit"]);
    let fit = fit_power_law("order", &x, &errors)?;
    for ((g, xi), e) in g_ladder.iter().zip(&x).zip(&errors) {
        rep.rows.push(vec![*g, *xi, *e, fit.predict(*xi)]);
    }
    let (first, last) = (errors[0], *errors.last().unwrap());
    rep.check("strictly decreasing", strictly_decreasing(&errors), format!("errors {errors:?}"));
    rep.check("positive order", fit.slope > 0.0, format!("order {:.4} (> 0)", fit.slope));
    rep.check("fit residual", fit.residual < 0.1, format!("{:.3e} (< 0.1)", fit.residual));
    rep.check("finest vs coarsest", last <= 0.5 * first, format!("{last:.3e} ≤ ½·{first:.3e}"));
    let pred = fit.predict(*x.last().unwrap());
    rep.check(
        "intercept consistency",
        pred <= 2.0 * last && last <= 2.0 * pred,
        format!("fit {pred:.3e} vs finest {last:.3e} (within 2×)"),
    );
    rep.notes.push(format!("reference ‖u(t_end)‖ = {ref_norm:.6e}"));
    rep.fits.push(fit);
    Ok(rep)
}

/// C^∞ bump exp(1 − 1/(1 − (r/R)²)) supported in |v| < R, equal to 1 at the origin.
pub fn bump(v: &[f64], radius: f64) -> f64 {
    let t = v.iter().map(|x| x * x).sum::<f64>() / (radius * radius);
    if t >= 1.0 { 0.0 } else { (1.0 - 1.0 / (1.0 - t)).exp() }
}

/// Largest |v| over the grid nodes where the field is nonzero.
fn support_radius(psi: &PlaneField) -> f64 {
    let axes = psi.grid.axes();
    (0..psi.grid.len())
        .filter(|&k| psi.values[k] != 0.0)
        .map(|k| psi.grid.node(k)[..axes].iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Sup-norm distance between κ(−Δ)^s_g ψ and the free-space (−Δ)^s ψ over a
/// ladder of g, plus the tail slope of the finest approximation.
pub fn operator_rate_study(psi: &PlaneField, s: f64, g_ladder: &[f64]) -> Result<StudyReport> {
    check_ladder(g_ladder)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(out_of_range(format!("s must lie in (0, 1), got {s}")));
    }
    let grid = psi.grid;
    let axes = grid.axes();
    let half = 0.5 * grid.half_width();
    let support = support_radius(psi) + grid.spacing();
    if support == grid.spacing() || support > half {
        return Err(out_of_range("ψ must be nonzero and supported inside the interior half of the grid"));
    }
    let reference = frac_lap_free_space(psi, s)?;
    // interior nodes, thinned to 33 per axis (d = 2) or 17 (d = 3)
    let stride = (grid.n() / if axes == 1 { 64 } else { 32 }).max(1);
    let pick = |i: usize| i.is_multiple_of(stride) && grid.coord(i).abs() <= half;
    let points: Vec<usize> = (0..grid.len())
        .filter(|&k| {
            let [i, j] = grid.index(k);
            pick(i) && (axes == 1 || pick(j))
        })
        .collect();
    let kappa = approx_normalization(axes, s);
    let interp = |p: &[f64]| psi.interpolate(p);
    let scale = 0.25 * support;
    let errors: Vec<f64> = g_ladder
        .iter()
        .map(|&g| {
            points
                .par_iter()
                .map(|&k| {
                    let v = &grid.node(k)[..axes];
                    (kappa * frac_lap_g_at(&interp, v, s, g, scale) - reference.values[k]).abs()
                })
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    let x: Vec<f64> = g_ladder.iter().map(|g| 1.0 - g).collect();
    let fit = fit_power_law("beta", &x, &errors)?;
    let mut rep = StudyReport::new("operator-rate", &["series", "x", "value", "fit"]);
    for (xi, e) in x.iter().zip(&errors) {
        rep.rows.push(vec![0.0, *xi, *e, fit.predict(*xi)]);
    }
    let g_fine = *g_ladder.last().unwrap();
    let radii = [8.0, 16.0, 32.0, 64.0];
    let tail: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let mut v = [0.0; 2];
            v[0] = r;
            (kappa * frac_lap_g_compact_far(&interp, support, &v[..axes], s, g_fine)).abs()
        })
        .collect();
    let brackets: Vec<f64> = radii.iter().map(|r: &f64| (1.0 + r * r).sqrt()).collect();
    let tail_fit = fit_power_law("tail_slope", &brackets, &tail)?;
    for (b, t) in brackets.iter().zip(&tail) {
        rep.rows.push(vec![1.0, *b, *t, tail_fit.predict(*b)]);
    }
    let expected = -(axes as f64 + 2.0 * s);
    rep.check("strictly decreasing", strictly_decreasing(&errors), format!("sup errors {errors:?}"));
    rep.check("positive beta", fit.slope > 0.0, format!("beta {:.4} (> 0)", fit.slope));
    rep.check(
        "tail slope",
        (tail_fit.slope - expected).abs() <= 0.1 * expected.abs(),
        format!("{:.4} vs {expected:.4} (±10%)", tail_fit.slope),
    );
    rep.notes.push("series 0: sup error against 1 − g; series 1: |output| against ⟨v⟩ at the finest g".into());
    rep.notes.push(format!("{} interior evaluation points, support radius {support:.4}", points.len()));
    rep.fits.push(fit);
    rep.fits.push(tail_fit);
    Ok(rep)
}

/// Level-set inequality residuals of a finished run, one row per level and interval.
pub fn level_set_energy_check(out: &RunOutput) -> StudyReport {
    let mut rep = StudyReport::new("level-set", &["fraction", "lambda", "time", "residual", "norm_sq", "floor"]);
    let mut worst: Option<(f64, f64)> = None;
    let mut ok = true;
    for r in &out.level_sets {
        let floor = -LEVEL_SET_TOL * r.start_norm_sq;
        rep.rows.push(vec![r.fraction, r.lambda, r.time, r.residual, r.start_norm_sq, floor]);
        if r.residual < floor {
            ok = false;
        }
        let margin = r.residual - floor;
        if worst.is_none_or(|(m, _)| margin < m) {
            worst = Some((margin, r.fraction));
        }
    }
    let detail = match worst {
        Some((m, f)) => format!("{} intervals, smallest margin {m:.3e} at fraction {f}", out.level_sets.len()),
        None => "no level sets recorded".into(),
    };
    rep.check("residual floor", ok && worst.is_some(), detail);
    let scale = out.diagnostics.first().map_or(1.0, |d| d.l2 * d.l2).max(1.0);
    let zero: Vec<_> = out.level_sets.iter().filter(|r| r.fraction == 0.0).collect();
    if !zero.is_empty() {
        let mut max_diff = 0.0f64;
        let mut matched = true;
        for r in &zero {
            match out.diagnostics.iter().find(|d| d.time == r.time) {
                Some(d) => max_diff = max_diff.max((d.energy_residual - r.residual).abs()),
                None => matched = false,
            }
        }
        rep.check(
            "zero level matches energy residual",
            matched && max_diff <= MEE_MATCH_TOL * scale,
            format!("max difference {max_diff:.3e} (≤ {:.1e})", MEE_MATCH_TOL * scale),
        );
    }
    rep
}

/// Runs `cfg` and checks the level-set inequality for each fraction of max u(0).
pub fn level_set_study(cfg: &SolverConfig, u0: &PhaseField, fractions: &[f64]) -> Result<StudyReport> {
    if fractions.is_empty() {
        return Err(Error::Config("level-set study needs at least one level".into()));
    }
    let mut c = cfg.clone();
    c.levels = fractions.to_vec();
    c.snapshot_every = 0;
    Ok(level_set_energy_check(&run(&c, u0)?))
}

/// Fits ‖u(t)‖_∞ ~ t^{−a} after `transient` on the ladder t_end·2^{−k/2}.
pub fn decay_study(cfg: &SolverConfig, u0: &PhaseField, transient: f64) -> Result<StudyReport> {
    let box_size = u0.spatial.box_size();
    if box_size < 2.0 * (1.0 + cfg.t_end) {
        return Err(out_of_range(format!(
            "decay study needs box ≥ 2(1 + t_end) = {}, got {box_size}",
            2.0 * (1.0 + cfg.t_end)
        )));
    }
    if !(transient > 0.0 && transient < cfg.t_end) {
        return Err(out_of_range(format!("transient must lie in (0, t_end), got {transient}")));
    }
    let mut ladder = Vec::new();
    for k in 0.. {
        let t = cfg.t_end * 2f64.powf(-0.5 * k as f64);
        if t < transient {
            break;
        }
        ladder.push(t);
    }
    ladder.reverse();
    if ladder.len() < 5 {
        return Err(Error::WindowTooShort(ladder.len()));
    }
    let mut c = cfg.clone();
    c.snapshot_every = 0;
    let out = run(&c, u0)?;
    let sample = |t: f64| {
        out.linf_steps
            .iter()
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
            .copied()
            .expect("run has at least one step")
    };
    let points: Vec<(f64, f64)> = ladder.iter().map(|&t| sample(t)).collect();
    let start = points.len() / 2;
    let window = &points[start..];
    let fit = fit_power_law(
        "decay",
        &window.iter().map(|p| p.0).collect::<Vec<_>>(),
        &window.iter().map(|p| p.1).collect::<Vec<_>>(),
    )?;
    let a = -fit.slope;
    let mut rep = StudyReport::new("decay", &["time", "linf", "in_window", "fit"]);
    for (i, p) in points.iter().enumerate() {
        rep.rows.push(vec![p.0, p.1, if i >= start { 1.0 } else { 0.0 }, fit.predict(p.0)]);
    }
    let post: Vec<f64> = out.linf_steps.iter().filter(|p| p.0 >= transient).map(|p| p.1).collect();
    let rises = post.windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-12)).count();
    rep.check("nonincreasing", rises == 0, format!("{rises} increases after t = {transient}"));
    rep.check("exponent", a >= DECAY_MIN_EXPONENT, format!("a = {a:.4} (≥ {DECAY_MIN_EXPONENT})"));
    rep.notes.push(format!("box {box_size}, t_end {}, {} ladder points", cfg.t_end, points.len()));
    rep.fits.push(fit);
    Ok(rep)
}

/// ∫‖(−Δ_x)^β ρ‖² dt along a run with snapshots every `cfg.snapshot_every` steps (1 if unset).
pub fn rho_regularity_study(cfg: &SolverConfig, u0: &PhaseField, delta: f64) -> Result<StudyReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(out_of_range(format!("δ must lie in (0, 1), got {delta}")));
    }
    let mut c = cfg.clone();
    if c.snapshot_every == 0 {
        c.snapshot_every = 1;
    }
    let out = run(&c, u0)?;
    let reg = rho_regularity(&out.snapshots, cfg.kernel.base().s, delta);
    let mut rep = StudyReport::new("rho-regularity", &["time", "norm_sq", "beta"]);
    for (t, v) in &reg.samples {
        rep.rows.push(vec![*t, *v, reg.beta]);
    }
    rep.check("finite", reg.value.is_finite() && reg.value >= 0.0, format!("integral {:.6e}", reg.value));
    rep.notes.push(format!("beta = {:.6}, delta = {delta}", reg.beta));
    if reg.extrapolated {
        rep.notes.push("d = 2: exponent uses the d = 3 formula (extrapolated)".into());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Dim;
    use crate::kernels::KernelSpec;
    use crate::scatter::SphereQuadrature;
    use crate::solver::SpatialGrid;

    #[test]
    fn ladder_validation() {
        assert!(matches!(check_ladder(&[0.9, 0.95]), Err(Error::Config(_))));
        assert!(check_ladder(&[0.9, 0.95, 0.99]).is_ok());
        assert!(check_ladder(&[0.9, 0.99, 0.95]).is_err());
    }

    #[test]
    fn bump_profile() {
        assert_eq!(bump(&[0.0, 0.0], 2.0), 1.0);
        assert_eq!(bump(&[2.0], 2.0), 0.0);
        assert!(bump(&[1.0], 2.0) > 0.0);
    }

    #[test]
    fn empty_level_set_has_zero_terms() {
        let k = Kernel::Limiting(KernelSpec::pure(Dim::TWO, 0.25, 1.0).unwrap());
        let g = SpatialGrid::new(Dim::TWO, 8.0, 32).unwrap();
        let q = SphereQuadrature::circle(16).unwrap();
        let u0 = PhaseField::from_fn(g, q, |x, t| (-x[0] * x[0] - x[1] * x[1]).exp() * (1.5 + t.components()[0])).unwrap();
        let mut cfg = SolverConfig::new(k, 0.1, 0.3, 7);
        cfg.levels = vec![0.0, 0.999];
        let out = run(&cfg, &u0).unwrap();
        let rep = level_set_energy_check(&out);
        assert!(rep.passed(), "{}", rep.summary());
        // λ close to max u0: the truncation is tiny and stays tiny
        for r in out.level_sets.iter().filter(|r| r.fraction == 0.999) {
            assert!(r.start_norm_sq < 1e-6 && r.residual.abs() < 1e-6);
        }
    }

    #[test]
    fn short_decay_window() {
        let k = Kernel::Limiting(KernelSpec::pure(Dim::TWO, 0.25, 1.0).unwrap());
        let g = SpatialGrid::new(Dim::TWO, 8.0, 8).unwrap();
        let u0 = PhaseField::from_fn(g, SphereQuadrature::circle(8).unwrap(), |_, _| 1.0).unwrap();
        let cfg = SolverConfig::new(k, 0.1, 2.0, 3);
        assert!(matches!(decay_study(&cfg, &u0, 1.0), Err(Error::WindowTooShort(3))));
        assert!(decay_study(&SolverConfig { t_end: 4.0, ..cfg }, &u0, 1.0).is_err());
    }
}
