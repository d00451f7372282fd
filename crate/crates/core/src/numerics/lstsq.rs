use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::{Error, Result};

/// Smallest accepted ratio `min |R_ii| / max |R_ii|`.
const CONDITION_FLOOR: f64 = 1e-12;

/// Solves `min |A x - y|` by Householder QR. `design` is row-major
/// `rows x cols`. Returns the coefficients and the residual norm.
pub fn least_squares(design: &[f64], rows: usize, cols: usize, y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if rows < cols || design.len() != rows * cols || y.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            got: design.len(),
        });
    }
    let mut a = design.to_vec();
    let mut b = y.to_vec();
    let mut rdiag = vec![0.0; cols];

    for k in 0..cols {
        let nrm = (k..rows).map(|i| a[i * cols + k].powi(2)).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Err(Error::IllConditioned { ratio: 0.0 });
        }
        let alpha = if a[k * cols + k] > 0.0 { -nrm } else { nrm };
        let mut v: Vec<f64> = (k..rows).map(|i| a[i * cols + k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        for j in k..cols {
            let s: f64 = (k..rows).map(|i| v[i - k] * a[i * cols + j]).sum::<f64>() * 2.0 / vv;
            for i in k..rows {
                a[i * cols + j] -= s * v[i - k];
            }
        }
        let s: f64 = (k..rows).map(|i| v[i - k] * b[i]).sum::<f64>() * 2.0 / vv;
        for i in k..rows {
            b[i] -= s * v[i - k];
        }
        rdiag[k] = a[k * cols + k];
    }

    let max = rdiag.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let min = rdiag.iter().map(|r| r.abs()).fold(f64::INFINITY, f64::min);
    let ratio = min / max;
    if !(ratio > CONDITION_FLOOR) {
        return Err(Error::IllConditioned { ratio });
    }

    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let s: f64 = (k + 1..cols).map(|j| a[k * cols + j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k * cols + k];
    }
    let residual = b[cols..].iter().map(|r| r * r).sum::<f64>().sqrt();
    Ok((x, residual))
}
