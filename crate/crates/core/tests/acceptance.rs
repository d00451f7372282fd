//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Expected values are recomputed here from closed forms, independently of
//! the library code paths they check.

use std::f64::consts::PI;
use std::process::ExitCode;

use toeplitz_core::asymptotics::{
    fit_bottom, gap_verdict, perturbation_crosscheck, selection_verdict, sweep, theorem_b_verdict, SelectionThresholds,
    Verdict,
};
use toeplitz_core::flat::{
    basis_function, model_spectrum, mu_toeplitz, perturbation_expansion, reproduce_by_quadrature, toeplitz_flat,
    toeplitz_flat_scaled, weyl_compare, FlatSymbol, FockBasis, QuadraticForm, SplitSymbol,
};
use toeplitz_core::numerics::eig_hermitian;
use toeplitz_core::sphere::{find_wells, husimi_integral, toeplitz_sphere, SpherePoint, SphereSymbol};
use toeplitz_core::{QuantumState, C64};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn one_minus_z2() -> SphereSymbol {
    SphereSymbol::from_terms([((0, 0, 0), 1.0), ((0, 0, 2), -1.0)]).unwrap()
}

/// X^2 + 4Y^2 + (1 - Z)(X^2 + Y^2)
fn asymmetric() -> SphereSymbol {
    SphereSymbol::from_terms([((2, 0, 0), 2.0), ((0, 2, 0), 5.0), ((2, 0, 1), -1.0), ((0, 2, 1), -1.0)]).unwrap()
}

fn poles() -> [SpherePoint; 2] {
    [SpherePoint::NORTH, SpherePoint::SOUTH]
}

fn flat_quadratic_oracle() -> Check {
    let mut worst_bottom = 0.0f64;
    let mut worst_levels = 0.0f64;
    for (a, b) in [(1.0f64, 1.0f64), (1.0, 4.0), (2.0, 3.0)] {
        let q = QuadraticForm::diagonal(&[a, b]).unwrap();
        let closed = (a.sqrt() + b.sqrt()).powi(2) / 4.0;
        let mu = mu_toeplitz(&q).unwrap();
        // Weight e^{-|z|^2} halves the value quoted for the other normalization.
        let other_convention = (a.sqrt() + b.sqrt()).powi(2) / 2.0;
        if (2.0 * mu - other_convention).abs() > 1e-12 || (mu - closed).abs() > 1e-12 {
            return Err(format!("mu({a},{b}) = {mu}, closed form {closed}"));
        }
        let eig = eig_hermitian(&toeplitz_flat(&q.to_symbol(), &FockBasis::new(1, 80)).unwrap(), false).unwrap();
        worst_bottom = worst_bottom.max((eig.values[0] - closed).abs());
        // Levels k sqrt(ab) above the bottom.
        let levels = model_spectrum(&q, 5).unwrap();
        for (k, (&got, &model)) in eig.values.iter().zip(&levels).enumerate() {
            let oracle = closed + k as f64 * (a * b).sqrt();
            if (model - oracle).abs() > 1e-12 {
                return Err(format!("model level {k} of ({a},{b}) = {model}, expected {oracle}"));
            }
            worst_levels = worst_levels.max((got - model).abs());
        }
    }
    ensure(
        worst_bottom < 1e-8 && worst_levels < 1e-7,
        format!("max bottom error {worst_bottom:.2e}, max level error {worst_levels:.2e}, factor 2 vs e^(-2|z|^2) convention asserted"),
    )
}

fn scaling_covariance() -> Check {
    let forms = [
        QuadraticForm::diagonal(&[1.0, 4.0]).unwrap(),
        QuadraticForm::new(1, vec![2.0, 0.7, 0.7, 3.0]).unwrap(),
        QuadraticForm::new(
            2,
            vec![
                3.0, 0.2, 0.5, 0.0, //
                0.2, 1.0, 0.0, -0.3, //
                0.5, 0.0, 2.0, 0.1, //
                0.0, -0.3, 0.1, 1.5,
            ],
        )
        .unwrap(),
    ];
    let mut worst = 0.0f64;
    for q in &forms {
        let basis = FockBasis::new(q.n(), if q.n() == 1 { 30 } else { 12 });
        let t1 = toeplitz_flat(&q.to_symbol(), &basis).unwrap();
        for big_n in [2.0, 5.0, 10.0] {
            let tn = toeplitz_flat_scaled(&q.to_symbol(), &basis, big_n).unwrap();
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    worst = worst.max((tn[(i, j)] - t1[(i, j)] / big_n).norm());
                }
            }
        }
    }
    ensure(worst <= 1e-12, format!("max entrywise |T_N - T_1/N| = {worst:.2e}"))
}

fn weyl_comparison() -> Check {
    let forms = [
        ("diag(1,1)", QuadraticForm::diagonal(&[1.0, 1.0]).unwrap()),
        ("diag(1,4)", QuadraticForm::diagonal(&[1.0, 4.0]).unwrap()),
        ("x^2-y^2+3(x^2+y^2)", QuadraticForm::diagonal(&[4.0, 2.0]).unwrap()),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, q) in &forms {
        let c = weyl_compare(q, 60).map_err(|e| format!("{name}: {e}"))?;
        ok &= c.max_deviation < 1e-8 && (c.shift - c.predicted_shift).abs() < 1e-10;
        parts.push(format!("{name}: dev {:.1e} c {:.4}", c.max_deviation, c.shift));
    }
    // (z^2 + zbar^2)/2 = x^2 - y^2
    let hol = QuadraticForm::diagonal(&[1.0, -1.0]).unwrap();
    let c = weyl_compare(&hol, 60).map_err(|e| e.to_string())?;
    ok &= c.shift.abs() < 1e-10 && c.max_deviation < 1e-8;
    parts.push(format!("holomorphic: c {:.1e} dev {:.1e}", c.shift, c.max_deviation));
    ensure(ok, parts.join("; "))
}

fn exact_sphere_formulas() -> Check {
    let mut worst = 0.0f64;
    for n in [4usize, 16, 64] {
        let nf = n as f64;
        let tz = toeplitz_sphere(&SphereSymbol::z(), n).unwrap();
        let tw = toeplitz_sphere(&one_minus_z2(), n).unwrap();
        for k in 0..=n {
            let kf = k as f64;
            worst = worst.max((tz[(k, k)].re - (nf - 2.0 * kf) / (nf + 2.0)).abs());
            let want = 4.0 * (kf + 1.0) * (nf + 1.0 - kf) / ((nf + 2.0) * (nf + 3.0));
            worst = worst.max((tw[(k, k)].re - want).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max diagonal error {worst:.2e}"))
}

fn leading_order() -> Check {
    let ns = [32usize, 64, 128, 256];
    let recs = sweep(&one_minus_z2(), &ns, 1).unwrap();
    let mut exact = 0.0f64;
    for r in &recs {
        let nf = r.n as f64;
        exact = exact.max((nf * r.bottom() - 4.0 * nf * (nf + 1.0) / ((nf + 2.0) * (nf + 3.0))).abs());
    }
    let sym = fit_bottom(&recs).unwrap();
    let asym = fit_bottom(&sweep(&asymmetric(), &ns, 1).unwrap()).unwrap();
    let ok = exact <= 1e-12
        && (sym.a0 - 4.0).abs() <= 0.02 * 4.0
        && (asym.a0 - 9.0).abs() <= 0.03 * 9.0
        && asym.half_ratio() < 0.05;
    ensure(
        ok,
        format!(
            "closed-form error {exact:.1e}; 1-Z^2 a0 = {:.5}; asymmetric a0 = {:.5}, |a_half/a0| = {:.4}",
            sym.a0,
            asym.a0,
            asym.half_ratio()
        ),
    )
}

fn quantum_selection() -> Check {
    let h = asymmetric();
    let wells = find_wells(&h, &poles()).unwrap();
    let r = selection_verdict(&h, &wells, &[32, 64, 128], PI / 4.0, SelectionThresholds::default()).unwrap();
    let idx = |p: SpherePoint| wells.wells.iter().position(|w| w.point == p).unwrap();
    let (north, south) = (idx(SpherePoint::NORTH), idx(SpherePoint::SOUTH));
    let south_masses: Vec<f64> = r.rows.iter().map(|row| row.masses[south]).collect();
    let last = r.rows.last().unwrap();
    let decreasing = south_masses.windows(2).all(|w| w[1] < w[0]);
    let ok = r.verdict == Verdict::Pass && last.masses[south] < 1e-6 && decreasing && last.masses[north] > 0.9;
    ensure(
        ok,
        format!(
            "south cap masses {:?}, north mass at N=128 {:.6}",
            south_masses.iter().map(|m| format!("{m:.2e}")).collect::<Vec<_>>(),
            last.masses[north]
        ),
    )
}

fn spectral_gap() -> Check {
    let recs = sweep(&asymmetric(), &[128, 256], 2).unwrap();
    let g = gap_verdict(&recs, 8.0, 1, 0.15).unwrap();
    let at256 = g.scaled_gaps[1].1;
    ensure(
        (at256 - 8.0).abs() <= 0.15 * 8.0 && g.verdict == Verdict::Pass,
        format!("N*gap = {:.4} at N=128, {at256:.4} at N=256", g.scaled_gaps[0].1),
    )
}

fn window_matching() -> Check {
    let n = 256;
    let h = one_minus_z2();
    let sym = theorem_b_verdict(&h, &find_wells(&h, &poles()).unwrap(), 14.0, n, 0.05).unwrap();
    let want = [4.0, 4.0, 8.0, 8.0, 12.0, 12.0];
    let models: Vec<f64> = sym.matches.iter().filter_map(|m| m.model).collect();
    let sym_ok = sym.verdict == Verdict::Pass
        && sym.matches.len() == 6
        && models.iter().zip(want).all(|(m, w)| (m - w).abs() < 1e-12);

    let h = asymmetric();
    let asym = theorem_b_verdict(&h, &find_wells(&h, &poles()).unwrap(), 20.0, n, 0.05).unwrap();
    let south = (12f64.sqrt() + 24f64.sqrt()).powi(2) / 4.0;
    let want = [9.0, 17.0, south];
    let models: Vec<f64> = asym.matches.iter().filter_map(|m| m.model).collect();
    let asym_ok = asym.verdict == Verdict::Pass
        && asym.matches.len() == 3
        && models.iter().zip(want).all(|(m, w)| (m - w).abs() < 1e-9);

    let fmt = |r: &toeplitz_core::asymptotics::TheoremBReport| {
        r.matches
            .iter()
            .map(|m| format!("{:.3}->{:.3}", m.scaled_eigenvalue, m.model.unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    ensure(
        sym_ok && asym_ok,
        format!("1-Z^2: [{}]; asymmetric: [{}]", fmt(&sym), fmt(&asym)),
    )
}

fn perturbation_recursion() -> Check {
    let harmonic = FlatSymbol::harmonic(1);
    let r4 = FlatSymbol::from_terms(1, [(vec![2], vec![2], re(0.1))]).unwrap();
    let quartic = perturbation_crosscheck(&harmonic.add(&r4), &[16, 32, 64, 128, 256], 40).unwrap();
    let mut exact = 0.0f64;
    for row in &quartic.rows {
        exact = exact.max(row.residual.abs());
        exact = exact.max((row.scaled_bottom - (1.0 + 0.2 / row.n as f64)).abs());
    }
    let quartic_ok =
        quartic.verdict == Verdict::Pass && exact < 1e-10 && (quartic.expansion.lambda2 - 0.2).abs() < 1e-12;

    let r3 = FlatSymbol::hermitian_pair(&[3], &[0], re(0.1)).unwrap();
    let cubic = perturbation_crosscheck(&harmonic.add(&r3), &[64, 128, 256], 40).unwrap();
    let l2 = cubic.lambda2_sweep.unwrap();
    let cubic_ok = (l2 + 0.02).abs() <= 0.01 * 0.02 && cubic.verdict == Verdict::Pass;

    // lambda_1 vanishes for odd perturbations.
    let odd = [
        (
            FlatSymbol::harmonic(1),
            FlatSymbol::hermitian_pair(&[3], &[0], re(0.1)).unwrap(),
        ),
        (
            FlatSymbol::harmonic(1),
            FlatSymbol::hermitian_pair(&[2], &[1], C64::new(0.3, -0.2)).unwrap(),
        ),
        (
            QuadraticForm::diagonal(&[1.0, 4.0]).unwrap().to_symbol(),
            FlatSymbol::hermitian_pair(&[1], &[2], re(0.5)).unwrap(),
        ),
        (
            QuadraticForm::diagonal(&[1.0, 2.0, 3.0, 1.5]).unwrap().to_symbol(),
            FlatSymbol::hermitian_pair(&[1, 1], &[0, 1], C64::new(0.2, 0.1))
                .unwrap()
                .add(&FlatSymbol::hermitian_pair(&[0, 3], &[0, 0], re(0.05)).unwrap()),
        ),
    ];
    let mut worst_l1 = 0.0f64;
    for (q, r) in &odd {
        let split = SplitSymbol::new(&q.add(r)).unwrap();
        let e = perturbation_expansion(&split, &FockBasis::new(q.n(), if q.n() == 1 { 40 } else { 16 })).unwrap();
        worst_l1 = worst_l1.max(e.lambda1.abs());
    }
    ensure(
        quartic_ok && cubic_ok && worst_l1 < 1e-10,
        format!("quartic residual {exact:.1e}; cubic lambda2 from sweep {l2:.6}; max |lambda1| {worst_l1:.1e}"),
    )
}

fn projector_properties() -> Check {
    let z = [C64::new(0.3, -0.5)];
    let mut repro = 0.0f64;
    for k in 0..=4u32 {
        let got = reproduce_by_quadrature(&[k], &z, 8.0, 80, 64);
        repro = repro.max((got - basis_function(&[k], &z)).norm());
    }
    // Two coordinates, |nu| <= 4.
    let z2 = [C64::new(0.2, 0.1), C64::new(-0.4, 0.3)];
    for nu in [[0u32, 0], [1, 0], [2, 2], [0, 4], [3, 1]] {
        let got = reproduce_by_quadrature(&nu, &z2, 8.0, 80, 64);
        repro = repro.max((got - basis_function(&nu, &z2)).norm());
    }

    let symbols = [
        one_minus_z2(),
        asymmetric(),
        one_minus_z2().powu(2),
        SphereSymbol::from_terms([((0, 0, 0), 1.0), ((0, 0, 1), -1.0)]).unwrap(),
        SphereSymbol::from_terms([((2, 0, 0), 1.0), ((0, 1, 1), 0.5), ((0, 0, 0), 0.3)])
            .unwrap()
            .powu(2),
    ];
    let mut norm_err = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for h in &symbols {
        for n in [8usize, 33, 64] {
            let eig = eig_hermitian(&toeplitz_sphere(h, n).unwrap(), true).unwrap();
            min_eig = min_eig.min(eig.values[0]);
            let ground = QuantumState::new(eig.vector(0).to_vec());
            norm_err = norm_err.max((husimi_integral(&ground).unwrap() - 1.0).abs());
        }
    }
    ensure(
        repro < 1e-6 && norm_err < 1e-10 && min_eig >= -1e-10,
        format!("reproducing error {repro:.1e}; Husimi mass error {norm_err:.1e}; min eigenvalue {min_eig:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("flat quadratic oracle", flat_quadratic_oracle),
        ("scaling covariance", scaling_covariance),
        ("Weyl comparison", weyl_comparison),
        ("exact sphere formulas", exact_sphere_formulas),
        ("leading-order asymptotics", leading_order),
        ("quantum selection", quantum_selection),
        ("spectral gap", spectral_gap),
        ("eigenvalue window matching", window_matching),
        ("perturbation recursion", perturbation_recursion),
        ("projector properties", projector_properties),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
