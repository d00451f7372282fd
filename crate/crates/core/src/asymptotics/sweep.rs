use alloc::format;
use alloc::vec::Vec;
use core::time::Duration;

use num_traits::Float;

use crate::numerics::{eig_hermitian, least_squares};
use crate::sphere::{toeplitz_sphere, SphereSymbol};
use crate::{Error, QuantumState, Result};

/// Low-lying spectrum of `T_N(h)` at one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub ground: Option<QuantumState>,
    /// Filled in by callers that can read a clock.
    pub wall_time: Option<Duration>,
}

impl SweepRecord {
    pub fn bottom(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn scaled(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l * self.n as f64).collect()
    }
}

/// One sweep entry. `k` eigenvalues are kept; `keep_ground` also stores the
/// bottom eigenvector.
pub fn sweep_point(h: &SphereSymbol, n: usize, k: usize, keep_ground: bool) -> Result<SweepRecord> {
    if k == 0 || k > n + 1 {
        return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={}", n + 1)));
    }
    let t = toeplitz_sphere(h, n)?;
    let eig = eig_hermitian(&t, keep_ground)?;
    let ground = keep_ground.then(|| QuantumState::new(eig.vector(0).to_vec()));
    Ok(SweepRecord {
        n,
        eigenvalues: eig.values[..k].to_vec(),
        ground,
        wall_time: None,
    })
}

/// Validates that `n_list` is strictly increasing and nonempty, with
/// `k <= min(N) + 1`.
pub fn check_n_list(n_list: &[usize], k: usize) -> Result<()> {
    let Some(&first) = n_list.first() else {
        return Err(Error::OutOfRange("empty N list".into()));
    };
    if first == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("N list must be strictly increasing".into()));
    }
    if k == 0 || k > first + 1 {
        return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={}", first + 1)));
    }
    Ok(())
}

/// Sequential sweep; callers wanting parallelism map [`sweep_point`]
/// themselves, which gives identical records.
pub fn sweep(h: &SphereSymbol, n_list: &[usize], k: usize) -> Result<Vec<SweepRecord>> {
    check_n_list(n_list, k)?;
    n_list.iter().map(|&n| sweep_point(h, n, k, false)).collect()
}

/// Which large parameter the fit expands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitParameter {
    /// `N lambda = a0 + a_half N^{-1/2} + a1 N^{-1}`.
    N,
    /// Same model in `M = N + 2`: `M lambda = a0 + a_half M^{-1/2} + a1 M^{-1}`.
    NPlus2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub parameter: FitParameter,
    pub a0: f64,
    pub a_half: f64,
    pub a1: f64,
    /// Euclidean norm of the fit residual.
    pub residual: f64,
}

impl FitResult {
    /// `|a_half / a0|`; infinite when `a0 = 0` and `a_half != 0`.
    pub fn half_ratio(&self) -> f64 {
        if self.a_half == 0.0 {
            0.0
        } else {
            (self.a_half / self.a0).abs()
        }
    }
}

/// Least-squares fit of `(N_i, lambda_i)` pairs.
pub fn fit_points(ns: &[f64], lambdas: &[f64], parameter: FitParameter) -> Result<FitResult> {
    if ns.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: ns.len(),
            got: lambdas.len(),
        });
    }
    if ns.len() < 4 {
        return Err(Error::OutOfRange(format!(
            "fit needs at least 4 points, got {}",
            ns.len()
        )));
    }
    let mut design = Vec::with_capacity(3 * ns.len());
    let mut y = Vec::with_capacity(ns.len());
    for (&n, &l) in ns.iter().zip(lambdas) {
        let m = match parameter {
            FitParameter::N => n,
            FitParameter::NPlus2 => n + 2.0,
        };
        design.extend_from_slice(&[1.0, 1.0 / m.sqrt(), 1.0 / m]);
        y.push(m * l);
    }
    let (c, residual) = least_squares(&design, ns.len(), 3, &y)?;
    Ok(FitResult {
        parameter,
        a0: c[0],
        a_half: c[1],
        a1: c[2],
        residual,
    })
}

/// Fit of the bottom eigenvalues in `N`.
pub fn fit_bottom(records: &[SweepRecord]) -> Result<FitResult> {
    fit_bottom_in(records, FitParameter::N)
}

pub fn fit_bottom_in(records: &[SweepRecord], parameter: FitParameter) -> Result<FitResult> {
    let ns: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let ls: Vec<f64> = records.iter().map(SweepRecord::bottom).collect();
    fit_points(&ns, &ls, parameter)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitComparison {
    pub in_n: FitResult,
    pub in_n_plus_2: FitResult,
}

impl FitComparison {
    /// The parameter with the smaller residual; `N` on ties.
    pub fn preferred(&self) -> FitParameter {
        if self.in_n_plus_2.residual < self.in_n.residual {
            FitParameter::NPlus2
        } else {
            FitParameter::N
        }
    }
}

pub fn compare_fits(records: &[SweepRecord]) -> Result<FitComparison> {
    Ok(FitComparison {
        in_n: fit_bottom_in(records, FitParameter::N)?,
        in_n_plus_2: fit_bottom_in(records, FitParameter::NPlus2)?,
    })
}
