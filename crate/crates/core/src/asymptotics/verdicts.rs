use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use super::{check_n_list, sweep_point, SweepRecord, Verdict};
use crate::flat::model_spectrum;
use crate::numerics::eig_hermitian;
use crate::sphere::{toeplitz_sphere, Husimi, SpherePoint, SphereSymbol, WellSet, RESONANCE_TOL};
use crate::{Error, QuantumState, Result};

/// Ground pairs closer than this are treated as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionThresholds {
    /// Upper bound on the cap mass of every non-minimal well at the largest `N`.
    pub other_mass: f64,
    /// Lower bound on the total cap mass of the minimal wells at the largest `N`.
    pub selected_mass: f64,
    /// Allowed distance from an even split for resonant minimal wells.
    pub balance: f64,
}

impl Default for SelectionThresholds {
    fn default() -> Self {
        Self {
            other_mass: 1e-6,
            selected_mass: 0.9,
            balance: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRow {
    pub n: usize,
    /// `lambda_2 - lambda_1`.
    pub gap: f64,
    /// Cap mass of the ground state at each well, in the order of `WellSet::wells`.
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub verdict: Verdict,
    pub rows: Vec<SelectionRow>,
    /// Per well: whether its `mu` is minimal.
    pub minimal: Vec<bool>,
    pub cap_radius: f64,
    pub thresholds: SelectionThresholds,
    pub reason: &'static str,
}

/// Husimi cap masses of the ground state of `T_N(h)` around each well.
///
/// PASS requires the wells of non-minimal `mu` to carry less than
/// `other_mass` at the largest `N`, with strictly decreasing mass across
/// `N`, and the minimal wells to carry more than `selected_mass`. With
/// several minimal wells each must hold an equal share within `balance`.
/// A ground gap below [`DEGENERATE_GAP`] at any `N` gives UNDECIDED.
pub fn selection_verdict(
    h: &SphereSymbol,
    wells: &WellSet,
    n_list: &[usize],
    cap_radius: f64,
    thresholds: SelectionThresholds,
) -> Result<SelectionReport> {
    check_n_list(n_list, 2)?;
    if wells.wells.is_empty() {
        return Err(Error::OutOfRange("selection needs at least one well".into()));
    }
    let best = wells.wells[0].mu;
    let minimal: Vec<bool> = wells.wells.iter().map(|w| w.mu - best < RESONANCE_TOL).collect();

    let mut rows = Vec::with_capacity(n_list.len());
    let mut degenerate = false;
    for &n in n_list {
        let rec = sweep_point(h, n, 2, true)?;
        let gap = rec.eigenvalues[1] - rec.eigenvalues[0];
        degenerate |= gap < DEGENERATE_GAP;
        let husimi = Husimi::new(rec.ground.as_ref().expect("requested ground state"))?;
        let masses = wells
            .wells
            .iter()
            .map(|w| husimi.cap_mass(&w.point, cap_radius))
            .collect::<Result<Vec<_>>>()?;
        rows.push(SelectionRow { n, gap, masses });
    }

    let (verdict, reason) = if degenerate {
        (Verdict::Undecided, "ground state is degenerate to 1e-12 at some N")
    } else {
        judge_selection(&rows, &minimal, &thresholds)
    };
    Ok(SelectionReport {
        verdict,
        rows,
        minimal,
        cap_radius,
        thresholds,
        reason,
    })
}

fn judge_selection(rows: &[SelectionRow], minimal: &[bool], t: &SelectionThresholds) -> (Verdict, &'static str) {
    let last = rows.last().expect("nonempty N list");
    for (i, &is_min) in minimal.iter().enumerate() {
        if is_min {
            continue;
        }
        if !(last.masses[i] < t.other_mass) {
            return (Verdict::Fail, "a non-minimal well keeps too much mass");
        }
        if rows.windows(2).any(|w| !(w[1].masses[i] < w[0].masses[i])) {
            return (Verdict::Fail, "non-minimal well mass is not strictly decreasing");
        }
    }
    let selected: f64 = minimal
        .iter()
        .zip(&last.masses)
        .filter(|(m, _)| **m)
        .map(|(_, x)| x)
        .sum();
    if !(selected > t.selected_mass) {
        return (Verdict::Fail, "minimal wells hold too little mass");
    }
    let count = minimal.iter().filter(|m| **m).count();
    if count > 1 {
        let share = 1.0 / count as f64;
        if minimal
            .iter()
            .zip(&last.masses)
            .any(|(m, x)| *m && (x - share).abs() > t.balance)
        {
            return (Verdict::Fail, "mass is not shared evenly between resonant wells");
        }
    }
    (Verdict::Pass, "ground state concentrates on the minimal wells")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub verdict: Verdict,
    /// `(N, N (lambda_{upper} - lambda_1))`.
    pub scaled_gaps: Vec<(usize, f64)>,
    pub predicted: f64,
    /// Zero-based index of the upper eigenvalue; 1 is the ordinary gap.
    pub upper_index: usize,
    pub tolerance: f64,
}

/// PASS when the scaled gap at the largest `N` is within `tolerance` of
/// `predicted` (relative; absolute when `predicted = 0`) and its distance
/// to the prediction did not grow from the previous `N`.
pub fn gap_verdict(records: &[SweepRecord], predicted: f64, upper_index: usize, tolerance: f64) -> Result<GapReport> {
    if upper_index == 0 {
        return Err(Error::OutOfRange("upper eigenvalue index must be at least 1".into()));
    }
    if records.is_empty() {
        return Err(Error::OutOfRange("no records".into()));
    }
    let mut scaled_gaps = Vec::with_capacity(records.len());
    for r in records {
        if r.eigenvalues.len() <= upper_index {
            return Err(Error::OutOfRange(format!(
                "record at N = {} holds {} eigenvalues, index {upper_index} requested",
                r.n,
                r.eigenvalues.len()
            )));
        }
        scaled_gaps.push((r.n, r.n as f64 * (r.eigenvalues[upper_index] - r.eigenvalues[0])));
    }
    let dev = |g: f64| {
        if predicted == 0.0 {
            g.abs()
        } else {
            ((g - predicted) / predicted).abs()
        }
    };
    let last = dev(scaled_gaps[scaled_gaps.len() - 1].1);
    let stabilizing = scaled_gaps.len() < 2 || last <= dev(scaled_gaps[scaled_gaps.len() - 2].1) + 1e-12;
    let verdict = Verdict::from_bool(last <= tolerance && stabilizing);
    Ok(GapReport {
        verdict,
        scaled_gaps,
        predicted,
        upper_index,
        tolerance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowMatch {
    /// `N lambda`.
    pub scaled_eigenvalue: f64,
    pub model: Option<f64>,
    pub relative_deviation: f64,
    /// `N^{1/2} (N lambda - model)`: the empirical size of the next
    /// correction on its natural scale.
    pub half_residue: Option<f64>,
    /// Another model value was equally close.
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremBReport {
    pub verdict: Verdict,
    pub n: usize,
    pub window: f64,
    /// Model values up to `window / (1 - tolerance)`, ascending.
    pub model_values: Vec<f64>,
    pub matches: Vec<WindowMatch>,
    /// Model values at most `window / (1 + tolerance)` left unmatched.
    pub missing: Vec<f64>,
    pub tolerance: f64,
}

/// Matches the eigenvalues of `T_N(h)` in `[0, C/N]` against the union of
/// the wells' harmonic model spectra, greedily in ascending order.
pub fn theorem_b_verdict(
    h: &SphereSymbol,
    wells: &WellSet,
    window: f64,
    n: usize,
    tolerance: f64,
) -> Result<TheoremBReport> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::OutOfRange(format!("tolerance {tolerance} outside (0, 1)")));
    }
    let reach = window / (1.0 - tolerance);
    let mut model_values = Vec::new();
    for w in &wells.wells {
        let mut count = 8;
        loop {
            let levels = model_spectrum(&w.hessian, count)?;
            if levels.last().is_some_and(|&l| l > reach) || levels.len() < count {
                model_values.extend(levels.into_iter().filter(|&l| l <= reach));
                break;
            }
            count *= 2;
        }
    }
    model_values.sort_by(f64::total_cmp);

    let eig = eig_hermitian(&toeplitz_sphere(h, n)?, false)?;
    let nf = n as f64;
    let scaled: Vec<f64> = eig.values.iter().map(|l| l * nf).filter(|&x| x <= window).collect();
    let (matches, used) = greedy_match(&scaled, &model_values, nf);

    let missing: Vec<f64> = model_values
        .iter()
        .zip(&used)
        .filter(|(m, u)| !**u && **m <= window / (1.0 + tolerance))
        .map(|(m, _)| *m)
        .collect();
    let ok = missing.is_empty()
        && matches
            .iter()
            .all(|m| m.model.is_some() && m.relative_deviation <= tolerance);
    Ok(TheoremBReport {
        verdict: Verdict::from_bool(ok),
        n,
        window,
        model_values,
        matches,
        missing,
        tolerance,
    })
}

/// Sorts both lists, then assigns each eigenvalue the nearest unused model
/// value (lowest index on ties).
pub fn greedy_match(scaled: &[f64], model: &[f64], n: f64) -> (Vec<WindowMatch>, Vec<bool>) {
    let mut eigs = scaled.to_vec();
    eigs.sort_by(f64::total_cmp);
    let mut model_sorted = model.to_vec();
    model_sorted.sort_by(f64::total_cmp);
    let mut used = alloc::vec![false; model_sorted.len()];
    let mut out = Vec::with_capacity(eigs.len());
    for &e in &eigs {
        let mut best: Option<(usize, f64)> = None;
        let mut tie = false;
        for (j, &m) in model_sorted.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (e - m).abs();
            match best {
                Some((_, bd)) if d < bd - 1e-12 => {
                    best = Some((j, d));
                    tie = false;
                }
                Some((bj, bd)) if (d - bd).abs() <= 1e-12 && model_sorted[bj] != m => tie = true,
                None => best = Some((j, d)),
                _ => {}
            }
        }
        match best {
            Some((j, _)) => {
                used[j] = true;
                let m = model_sorted[j];
                out.push(WindowMatch {
                    scaled_eigenvalue: e,
                    model: Some(m),
                    relative_deviation: if m == 0.0 { (e - m).abs() } else { ((e - m) / m).abs() },
                    half_residue: Some(n.sqrt() * (e - m)),
                    tie,
                });
            }
            None => out.push(WindowMatch {
                scaled_eigenvalue: e,
                model: None,
                relative_deviation: f64::INFINITY,
                half_residue: None,
                tie: false,
            }),
        }
    }
    (out, used)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub delta: f64,
    /// `N^{-delta}`.
    pub radius: f64,
    pub outside_mass: f64,
}

/// Husimi mass of `u` outside the cap of radius `N^{-delta}` about `center`,
/// for each `delta` in `[0, 1/2)`. The spin `N` is read off the state.
pub fn concentration_profile(u: &QuantumState, center: &SpherePoint, deltas: &[f64]) -> Result<Vec<ProfilePoint>> {
    if let Some(&d) = deltas.iter().find(|&&d| !(0.0..0.5).contains(&d)) {
        return Err(Error::OutOfRange(format!("delta {d} outside [0, 1/2)")));
    }
    let husimi = Husimi::new(u)?;
    let n = husimi.n() as f64;
    deltas
        .iter()
        .map(|&delta| {
            let radius = n.powf(-delta);
            Ok(ProfilePoint {
                delta,
                radius,
                outside_mass: husimi.outside_mass(center, radius)?,
            })
        })
        .collect()
}
