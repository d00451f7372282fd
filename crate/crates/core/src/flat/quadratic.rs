use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::FlatSymbol;
use crate::numerics::{eig_hermitian, symplectic_spectrum, HermitianMatrix};
use crate::{Error, Result, C64};

/// Real symmetric `2n x 2n` matrix `M`, coordinates `(x_1..x_n, y_1..y_n)`
/// with `z_j = x_j + i y_j`, value `q(w) = w^T M w`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    n: usize,
    m: Vec<f64>,
}

impl QuadraticForm {
    pub fn new(n: usize, m: Vec<f64>) -> Result<Self> {
        let dim = 2 * n;
        if n == 0 || m.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: m.len(),
            });
        }
        let scale = m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        for i in 0..dim {
            for j in i + 1..dim {
                let d = (m[i * dim + j] - m[j * dim + i]).abs();
                if d > 1e-12 * scale {
                    return Err(Error::NotHermitian {
                        max_asymmetry: d,
                        row: i,
                        col: j,
                    });
                }
            }
        }
        Ok(Self { n, m })
    }

    /// Diagonal form; `diag.len()` must be even.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() || !diag.len().is_multiple_of(2) {
            return Err(Error::InvalidSymbol(format!(
                "diagonal of a form on C^n needs 2n entries, got {}",
                diag.len()
            )));
        }
        let dim = diag.len();
        let mut m = vec![0.0; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            m[i * dim + i] = d;
        }
        Self::new(dim / 2, m)
    }

    /// Recovers `M` from a homogeneous quadratic symbol by polarization.
    pub fn from_flat_symbol(symbol: &FlatSymbol) -> Result<Self> {
        if symbol.terms().any(|(a, b, _)| a.iter().chain(b).sum::<u32>() != 2) {
            return Err(Error::InvalidSymbol("symbol is not a homogeneous quadratic".into()));
        }
        let n = symbol.n();
        let dim = 2 * n;
        let point = |w: &[f64]| -> Vec<C64> { (0..n).map(|j| C64::new(w[j], w[n + j])).collect() };
        let mut m = vec![0.0; dim * dim];
        let mut e = vec![0.0; dim];
        let mut diag = vec![0.0; dim];
        for k in 0..dim {
            e[k] = 1.0;
            diag[k] = symbol.eval(&point(&e));
            e[k] = 0.0;
            m[k * dim + k] = diag[k];
        }
        for k in 0..dim {
            for l in k + 1..dim {
                e[k] = 1.0;
                e[l] = 1.0;
                let v = 0.5 * (symbol.eval(&point(&e)) - diag[k] - diag[l]);
                e[k] = 0.0;
                e[l] = 0.0;
                m[k * dim + l] = v;
                m[l * dim + k] = v;
            }
        }
        Self::new(n, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i * 2 * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn eval(&self, w: &[f64]) -> f64 {
        let dim = self.dim();
        (0..dim)
            .map(|i| (0..dim).map(|j| w[i] * self.get(i, j) * w[j]).sum::<f64>())
            .sum()
    }

    /// Smallest eigenvalue of `M`.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = HermitianMatrix::from_real_row_major(self.dim(), &self.m).expect("square by construction");
        eig_hermitian(&h, false).expect("symmetric by construction").values[0]
    }

    pub fn is_positive_definite(&self) -> bool {
        let scale = self.m.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        self.min_eigenvalue() > 1e-12 * scale
    }

    /// `S^T M S` for a real `2n x 2n` matrix `S` (row-major).
    pub fn congruence(&self, s: &[f64]) -> Result<Self> {
        let dim = self.dim();
        if s.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: s.len(),
            });
        }
        let mut out = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for k in 0..dim {
                    for l in 0..dim {
                        acc += s[k * dim + i] * self.get(k, l) * s[l * dim + j];
                    }
                }
                out[i * dim + j] = acc;
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let avg = 0.5 * (out[i * dim + j] + out[j * dim + i]);
                out[i * dim + j] = avg;
                out[j * dim + i] = avg;
            }
        }
        Self::new(self.n, out)
    }

    pub fn to_symbol(&self) -> FlatSymbol {
        FlatSymbol::from_quadratic_form(self)
    }
}

/// Bottom of the spectrum of the Toeplitz operator of `q` on the full
/// Bargmann space (weight `e^{-|z|^2}`, Lebesgue measure):
/// `sum_j lambda_j / 2 + tr(M) / 4` with `lambda_j` the symplectic spectrum.
pub fn mu_toeplitz(form: &QuadraticForm) -> Result<f64> {
    let lambdas = symplectic_spectrum(form)?;
    Ok(0.5 * lambdas.iter().sum::<f64>() + 0.25 * form.trace())
}

/// First `count` values of `sum_j (k_j + 1/2) lambda_j + tr(M)/4` over
/// `k in N^n`, ascending with multiplicity.
pub fn model_spectrum(form: &QuadraticForm, count: usize) -> Result<Vec<f64>> {
    let lambdas = symplectic_spectrum(form)?;
    let base = 0.5 * lambdas.iter().sum::<f64>() + 0.25 * form.trace();
    if count == 0 {
        return Ok(Vec::new());
    }
    let step = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let budget = (count - 1) as f64 * step * (1.0 + 1e-12) + 1e-12;

    let mut values = Vec::new();
    let mut k = vec![0usize; lambdas.len()];
    enumerate_levels(&lambdas, 0, 0.0, budget, &mut k, &mut |excitation| {
        values.push(base + excitation)
    });
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    Ok(values)
}

fn enumerate_levels(
    lambdas: &[f64],
    slot: usize,
    acc: f64,
    budget: f64,
    k: &mut Vec<usize>,
    emit: &mut dyn FnMut(f64),
) {
    if slot == lambdas.len() {
        emit(acc);
        return;
    }
    let mut kk = 0usize;
    loop {
        let e = acc + kk as f64 * lambdas[slot];
        if e > budget {
            break;
        }
        k[slot] = kk;
        enumerate_levels(lambdas, slot + 1, e, budget, k, emit);
        kk += 1;
    }
    k[slot] = 0;
}
