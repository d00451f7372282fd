use alloc::vec::Vec;

use num_traits::Float;

use super::Verdict;
use crate::flat::{perturbation_expansion, toeplitz_flat, FlatSymbol, FockBasis, PerturbationExpansion, SplitSymbol};
use crate::numerics::eig_hermitian;
use crate::{Error, Result};

/// Residuals below this are round-off and count as exact agreement.
pub const EXACT_RESIDUAL: f64 = 1e-10;
/// Minimum decay exponent of the residual between consecutive `N`.
pub const MIN_DECAY: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckRow {
    pub n: usize,
    /// Bottom of `N T_N(h)` on the truncated basis.
    pub scaled_bottom: f64,
    /// `lambda0 + lambda2 / N`.
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub verdict: Verdict,
    pub expansion: PerturbationExpansion,
    pub cutoff: usize,
    pub rows: Vec<CrosscheckRow>,
    /// `log(|r_i| / |r_{i+1}|) / log(N_{i+1} / N_i)` per consecutive pair;
    /// `None` when both residuals are round-off.
    pub decay_rates: Vec<Option<f64>>,
    /// `lambda_2` read off the sweep by Richardson extrapolation of
    /// `N (N lambda - lambda0)` over the last two `N`.
    pub lambda2_sweep: Option<f64>,
}

/// Compares `N lambda_min(T_N(q + r3 + r4))` with the perturbation series.
///
/// On the Fock basis `N T_N(h) = T_1(q + N^{-1/2} r3 + N^{-1} r4)`, so each
/// `N` costs one diagonalization at the fixed cutoff.
pub fn perturbation_crosscheck(h: &FlatSymbol, n_list: &[usize], cutoff: usize) -> Result<CrosscheckReport> {
    super::check_n_list(n_list, 1)?;
    let split = SplitSymbol::new(h)?;
    let basis = FockBasis::new(h.n(), cutoff);
    let expansion = perturbation_expansion(&split, &basis)?;

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let nf = n as f64;
        let t = toeplitz_flat(&split.at(nf.powf(-0.5)), &basis)?;
        let scaled_bottom = eig_hermitian(&t, false)?.values[0];
        let predicted = expansion.predicted_scaled(nf);
        rows.push(CrosscheckRow {
            n,
            scaled_bottom,
            predicted,
            residual: scaled_bottom - predicted,
        });
    }

    let decay_rates: Vec<Option<f64>> = rows
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].residual.abs(), w[1].residual.abs());
            if a < EXACT_RESIDUAL && b < EXACT_RESIDUAL {
                None
            } else {
                Some((a / b).ln() / (w[1].n as f64 / w[0].n as f64).ln())
            }
        })
        .collect();

    let lambda2_sweep = (rows.len() >= 2).then(|| {
        let e = |r: &CrosscheckRow| r.n as f64 * (r.scaled_bottom - expansion.lambda0);
        let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
        // e(N) = lambda2 + c / N
        let (na, nb) = (a.n as f64, b.n as f64);
        (nb * e(b) - na * e(a)) / (nb - na)
    });

    let ok =
        decay_rates.iter().all(|r| r.is_none_or(|r| r >= MIN_DECAY)) && rows.iter().all(|r| r.residual.is_finite());
    if rows.len() < 2 && !rows.iter().all(|r| r.residual.abs() < EXACT_RESIDUAL) {
        return Err(Error::OutOfRange("decay test needs at least two N".into()));
    }
    Ok(CrosscheckReport {
        verdict: Verdict::from_bool(ok),
        expansion,
        cutoff,
        rows,
        decay_rates,
        lambda2_sweep,
    })
}
