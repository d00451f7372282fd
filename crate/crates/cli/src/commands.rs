//! One function per subcommand. Each returns a verdict document and, for
//! spectrum-producing commands, a table.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};
use toeplitz_core::asymptotics::{
    check_n_list, compare_fits, concentration_profile, gap_verdict, perturbation_crosscheck, selection_verdict,
    sweep_point, theorem_b_verdict, FitResult, SelectionThresholds, SweepRecord, Verdict, DEGENERATE_GAP,
    EXACT_RESIDUAL, MIN_DECAY,
};
use toeplitz_core::flat::{
    choose_cutoff, model_spectrum, mu_toeplitz, toeplitz_flat_scaled, weyl_compare, FlatSymbol, FockBasis,
    QuadraticForm, LEVEL_TOL, TAIL_TOL,
};
use toeplitz_core::numerics::eig_hermitian;
use toeplitz_core::sphere::{
    find_wells, SpherePoint, SphereSymbol, Well, WellSet, NONNEGATIVE_TOL, RESONANCE_TOL, WELL_GRADIENT_TOL,
    WELL_VALUE_TOL,
};

use crate::config::{ExperimentConfig, PointSpec};
use crate::error::{CliError, CliResult};
use crate::report::{Report, SpectrumTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Well Hessians and the harmonic constant `mu` of each well.
    Mu,
    /// Low eigenvalues of a flat Toeplitz operator on a truncated Fock basis.
    FlatSpectrum,
    /// Low eigenvalues of the sphere Toeplitz matrices over a list of N.
    SphereSpectrum,
    /// Perturbative bottom of a flat symbol against direct diagonalization.
    Perturb,
    /// Husimi mass of the ground state near each well.
    Selection,
    /// Match N * lambda_j inside a window against the harmonic well models.
    TheoremB,
    /// Scaled gap N * (lambda_upper - lambda_0) against a predicted value.
    Gap,
    /// Ground-state Husimi mass outside caps of radius N^(-delta).
    Concentration,
    /// Anti-Wick spectrum against the Weyl harmonic oscillator.
    WeylCompare,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mu => "mu",
            Command::FlatSpectrum => "flat-spectrum",
            Command::SphereSpectrum => "sphere-spectrum",
            Command::Perturb => "perturb",
            Command::Selection => "selection",
            Command::TheoremB => "theorem-b",
            Command::Gap => "gap",
            Command::Concentration => "concentration",
            Command::WeylCompare => "weyl-compare",
        }
    }
}

/// `(N, wall time)` per sweep point.
pub type Timings = Vec<(usize, Duration)>;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub report: Report,
    pub table: Option<SpectrumTable>,
    /// Per-`N` wall time of the sweeps; never written to report files.
    pub timings: Timings,
}

pub fn run(command: Command, config: &ExperimentConfig) -> CliResult<Outcome> {
    if let Some(named) = &config.command {
        if named != command.name() {
            return Err(CliError::input(format!(
                "config is for command `{named}` but `{}` was requested",
                command.name()
            )));
        }
    }
    match command {
        Command::Mu => mu(config),
        Command::FlatSpectrum => flat_spectrum(config),
        Command::SphereSpectrum => sphere_spectrum(config),
        Command::Perturb => perturb(config),
        Command::Selection => selection(config),
        Command::TheoremB => theorem_b(config),
        Command::Gap => gap(config),
        Command::Concentration => concentration(config),
        Command::WeylCompare => weyl(config),
    }
}

fn outcome(verdict: Verdict, data: Value, thresholds: Value, tolerances: Value) -> Outcome {
    Outcome {
        verdict,
        report: Report {
            verdict: verdict.as_str().to_string(),
            data,
            thresholds,
            tolerances,
        },
        table: None,
        timings: Vec::new(),
    }
}

fn sphere_symbol(config: &ExperimentConfig, command: &str) -> CliResult<SphereSymbol> {
    match &config.sphere_symbol {
        Some(s) => s.build(),
        None => Err(CliError::input(format!("`{command}` needs a sphere_symbol"))),
    }
}

fn flat_symbol(config: &ExperimentConfig, command: &str) -> CliResult<FlatSymbol> {
    match &config.flat_symbol {
        Some(s) => s.build(),
        None => Err(CliError::input(format!("`{command}` needs a flat_symbol"))),
    }
}

fn n_list<'a>(config: &'a ExperimentConfig, command: &str) -> CliResult<&'a [usize]> {
    config
        .n_list
        .as_deref()
        .ok_or_else(|| CliError::input(format!("`{command}` needs an n_list")))
}

fn wells(config: &ExperimentConfig, h: &SphereSymbol, command: &str) -> CliResult<WellSet> {
    if config.wells.is_empty() {
        return Err(CliError::input(format!("`{command}` needs a nonempty wells list")));
    }
    let candidates = config
        .wells
        .iter()
        .map(PointSpec::build)
        .collect::<CliResult<Vec<_>>>()?;
    Ok(find_wells(h, &candidates)?)
}

fn point_json(p: &SpherePoint) -> Value {
    json!({"x": p.x(), "y": p.y(), "z": p.z()})
}

fn well_json(w: &Well, minimal: bool) -> Value {
    let d = w.hessian.dim();
    let rows: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| w.hessian.get(i, j)).collect()).collect();
    json!({"point": point_json(&w.point), "mu": w.mu, "hessian": rows, "minimal": minimal})
}

fn wells_json(set: &WellSet) -> Value {
    let best = set.wells.first().map(|w| w.mu).unwrap_or(0.0);
    Value::Array(
        set.wells
            .iter()
            .map(|w| well_json(w, w.mu - best < RESONANCE_TOL))
            .collect(),
    )
}

fn well_tolerances() -> Value {
    json!({
        "well_value": WELL_VALUE_TOL,
        "well_gradient": WELL_GRADIENT_TOL,
        "nonnegative": NONNEGATIVE_TOL,
        "resonance": RESONANCE_TOL,
    })
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut a), Value::Object(b)) => {
            a.extend(b);
            Value::Object(a)
        }
        (a, _) => a,
    }
}

/// Sweeps the `N` values in parallel; results come back in `n_list` order.
fn parallel_sweep(
    h: &SphereSymbol,
    ns: &[usize],
    k: usize,
    keep_ground: bool,
) -> CliResult<(Vec<SweepRecord>, Timings)> {
    check_n_list(ns, k)?;
    let records = ns
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let mut rec = sweep_point(h, n, k, keep_ground)?;
            rec.wall_time = Some(start.elapsed());
            Ok(rec)
        })
        .collect::<toeplitz_core::Result<Vec<_>>>()?;
    let timings = records.iter().map(|r| (r.n, r.wall_time.unwrap_or_default())).collect();
    Ok((records, timings))
}

fn table(records: &[SweepRecord]) -> SpectrumTable {
    SpectrumTable {
        rows: records.iter().map(|r| (r.n, r.eigenvalues.clone())).collect(),
    }
}

/// Fail beats undecided beats pass.
fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Pass;
    for v in verdicts {
        match v {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Undecided => out = Verdict::Undecided,
            _ => {}
        }
    }
    out
}

fn mu(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "mu")?;
    let set = wells(config, &h, "mu")?;
    let data = json!({
        "wells": wells_json(&set),
        "minimal_mu": set.selected().map(|w| w.mu),
        "resonant": set.resonant,
    });
    Ok(outcome(Verdict::Computed, data, json!({}), well_tolerances()))
}

/// The symbol as a quadratic form, when it is one and is positive definite.
fn positive_quadratic(h: &FlatSymbol) -> Option<QuadraticForm> {
    QuadraticForm::from_flat_symbol(h)
        .ok()
        .filter(QuadraticForm::is_positive_definite)
}

fn flat_spectrum(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = flat_symbol(config, "flat-spectrum")?;
    let (cutoff, converged) = match config.cutoff {
        Some(d) => (d, None),
        None => {
            let (d, ok) = choose_cutoff(&h, 20, 80)?;
            (d, Some(ok))
        }
    };
    let basis = FockBasis::new(h.n(), cutoff);
    let k = config.eigenvalues.unwrap_or(5);
    if k > basis.len() {
        return Err(CliError::input(format!(
            "eigenvalues = {k} exceeds the basis size {} at cutoff {cutoff}",
            basis.len()
        )));
    }
    let ns = config.n_list.clone().unwrap_or_else(|| vec![1]);
    let rows = ns
        .par_iter()
        .map(|&n| {
            let t = toeplitz_flat_scaled(&h, &basis, n as f64)?;
            Ok((n, eig_hermitian(&t, false)?.values[..k].to_vec()))
        })
        .collect::<toeplitz_core::Result<Vec<_>>>()?;
    let model = match positive_quadratic(&h) {
        Some(form) => json!({"mu": mu_toeplitz(&form)?, "levels": model_spectrum(&form, k)?}),
        None => Value::Null,
    };
    let data = json!({
        "cutoff": cutoff,
        "cutoff_converged": converged,
        "records": rows.iter().map(|(n, v)| json!({"n": n, "eigenvalues": v})).collect::<Vec<_>>(),
        "model_at_n_1": model,
    });
    let mut out = outcome(Verdict::Computed, data, json!({}), json!({"tail": TAIL_TOL}));
    out.table = Some(SpectrumTable { rows });
    Ok(out)
}

fn fit_json(f: &FitResult) -> Value {
    json!({"a0": f.a0, "a_half": f.a_half, "a1": f.a1, "half_ratio": f.half_ratio(), "residual": f.residual})
}

fn sphere_spectrum(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "sphere-spectrum")?;
    let ns = n_list(config, "sphere-spectrum")?;
    let k = config.eigenvalues.unwrap_or_else(|| 6.min(ns[0] + 1));
    let (records, timings) = parallel_sweep(&h, ns, k, false)?;
    let fits = if records.len() >= 4 {
        let cmp = compare_fits(&records)?;
        json!({"in_n": fit_json(&cmp.in_n), "in_n_plus_2": fit_json(&cmp.in_n_plus_2)})
    } else {
        Value::Null
    };
    let data = json!({
        "records": records
            .iter()
            .map(|r| json!({"n": r.n, "eigenvalues": r.eigenvalues, "scaled": r.scaled()}))
            .collect::<Vec<_>>(),
        "bottom_fits": fits,
    });
    let mut out = outcome(Verdict::Computed, data, json!({}), json!({}));
    out.table = Some(table(&records));
    out.timings = timings;
    Ok(out)
}

fn perturb(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = flat_symbol(config, "perturb")?;
    let ns = n_list(config, "perturb")?;
    let r = perturbation_crosscheck(&h, ns, config.cutoff.unwrap_or(40))?;
    let e = &r.expansion;
    let data = json!({
        "cutoff": r.cutoff,
        "lambda0": e.lambda0,
        "lambda1": e.lambda1,
        "lambda2": e.lambda2,
        "tail_mass": e.tail_mass,
        "tail_warning": e.tail_warning(),
        "rows": r.rows.iter().map(|row| json!({
            "n": row.n,
            "scaled_bottom": row.scaled_bottom,
            "predicted": row.predicted,
            "residual": row.residual,
        })).collect::<Vec<_>>(),
        "decay_rates": r.decay_rates,
        "lambda2_sweep": r.lambda2_sweep,
    });
    let tolerances = json!({
        "exact_residual": EXACT_RESIDUAL,
        "min_decay": MIN_DECAY,
        "level": LEVEL_TOL,
        "tail": TAIL_TOL,
    });
    Ok(outcome(r.verdict, data, json!({}), tolerances))
}

fn selection(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "selection")?;
    let set = wells(config, &h, "selection")?;
    let ns = n_list(config, "selection")?;
    let cap_radius = config.cap_radius.unwrap_or(std::f64::consts::FRAC_PI_4);
    let eff = config.tolerances.effective();
    let thresholds = SelectionThresholds {
        other_mass: eff.other_mass,
        selected_mass: eff.selected_mass,
        balance: eff.balance,
    };
    let r = selection_verdict(&h, &set, ns, cap_radius, thresholds)?;
    let data = json!({
        "wells": wells_json(&set),
        "rows": r.rows.iter().map(|row| json!({"n": row.n, "gap": row.gap, "masses": row.masses})).collect::<Vec<_>>(),
        "reason": r.reason,
    });
    let thresholds = json!({"cap_radius": cap_radius});
    let tolerances = merge(
        json!({
            "other_mass": eff.other_mass,
            "selected_mass": eff.selected_mass,
            "balance": eff.balance,
            "degenerate_gap": DEGENERATE_GAP,
        }),
        well_tolerances(),
    );
    Ok(outcome(r.verdict, data, thresholds, tolerances))
}

fn theorem_b(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "theorem-b")?;
    let set = wells(config, &h, "theorem-b")?;
    let ns = n_list(config, "theorem-b")?;
    let window = config
        .window
        .ok_or_else(|| CliError::input("`theorem-b` needs a window"))?;
    let tol = config.tolerances.effective().theorem_b;
    let reports = ns
        .par_iter()
        .map(|&n| theorem_b_verdict(&h, &set, window, n, tol))
        .collect::<toeplitz_core::Result<Vec<_>>>()?;
    let verdict = combine(reports.iter().map(|r| r.verdict));
    let per_n: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "verdict": r.verdict.as_str(),
                "model_values": r.model_values,
                "matches": r.matches.iter().map(|m| json!({
                    "scaled_eigenvalue": m.scaled_eigenvalue,
                    "model": m.model,
                    "relative_deviation": m.relative_deviation,
                    "half_residue": m.half_residue,
                    "tie": m.tie,
                })).collect::<Vec<_>>(),
                "missing": r.missing,
            })
        })
        .collect();
    let data = json!({"wells": wells_json(&set), "runs": per_n});
    let tolerances = merge(json!({"theorem_b": tol}), well_tolerances());
    Ok(outcome(verdict, data, json!({"window": window}), tolerances))
}

fn gap(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "gap")?;
    let ns = n_list(config, "gap")?;
    let predicted = config
        .predicted_gap
        .ok_or_else(|| CliError::input("`gap` needs a predicted_gap"))?;
    let upper = config.upper_index.unwrap_or(1);
    let tol = config.tolerances.effective().gap;
    let k = config.eigenvalues.unwrap_or(upper + 1).max(upper + 1);
    let (records, timings) = parallel_sweep(&h, ns, k, false)?;
    let r = gap_verdict(&records, predicted, upper, tol)?;
    let data = json!({
        "scaled_gaps": r.scaled_gaps.iter().map(|(n, g)| json!({"n": n, "scaled_gap": g})).collect::<Vec<_>>(),
    });
    let thresholds = json!({"predicted_gap": predicted, "upper_index": upper});
    let mut out = outcome(r.verdict, data, thresholds, json!({"gap": tol}));
    out.table = Some(table(&records));
    out.timings = timings;
    Ok(out)
}

fn concentration(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = sphere_symbol(config, "concentration")?;
    let ns = n_list(config, "concentration")?;
    let center = match &config.center {
        Some(c) => c.build()?,
        None => {
            let set = wells(config, &h, "concentration")?;
            set.selected().expect("find_wells returns at least one well").point
        }
    };
    let deltas = config.deltas.clone().unwrap_or_else(|| vec![0.0, 0.1, 0.2, 0.3, 0.4]);
    let (records, timings) = parallel_sweep(&h, ns, 1, true)?;
    let profiles = records
        .iter()
        .map(|r| {
            let u = r.ground.as_ref().expect("sweep kept the ground state");
            let points = concentration_profile(u, &center, &deltas)?;
            Ok(json!({
                "n": r.n,
                "points": points.iter().map(|p| json!({
                    "delta": p.delta,
                    "radius": p.radius,
                    "outside_mass": p.outside_mass,
                })).collect::<Vec<_>>(),
            }))
        })
        .collect::<toeplitz_core::Result<Vec<_>>>()?;
    let data = json!({"center": point_json(&center), "profiles": profiles});
    let mut out = outcome(Verdict::Computed, data, json!({"deltas": deltas}), json!({}));
    out.timings = timings;
    Ok(out)
}

fn weyl(config: &ExperimentConfig) -> CliResult<Outcome> {
    let h = flat_symbol(config, "weyl-compare")?;
    let form = QuadraticForm::from_flat_symbol(&h)?;
    let cutoff = config.cutoff.unwrap_or(60);
    let tol = config.tolerances.effective().weyl;
    let c = weyl_compare(&form, cutoff)?;
    let data = json!({
        "cutoff": cutoff,
        "scaling": c.scaling,
        "shift": c.shift,
        "predicted_shift": c.predicted_shift,
        "max_deviation": c.max_deviation,
        "worst_entry": [c.worst_entry.0, c.worst_entry.1],
        "interior_dim": c.interior_dim,
    });
    Ok(outcome(
        Verdict::from_bool(c.max_deviation <= tol),
        data,
        json!({}),
        json!({"weyl": tol}),
    ))
}
