use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{eig_hermitian, real_matmul, HermitianMatrix};
use crate::flat::QuadraticForm;
use crate::{Error, Result};

/// Williamson (symplectic) eigenvalues of a positive definite form: the
/// `lambda_j > 0` such that `+-i lambda_j` is the spectrum of `J M`, with
/// `J = [[0, -I], [I, 0]]`. Ascending, length `n`.
///
/// Uses the skew-symmetric `K = M^{1/2} J M^{1/2}`: `-K^2 = K^T K` is
/// symmetric with eigenvalues `lambda_j^2`, each twice.
pub fn symplectic_spectrum(form: &QuadraticForm) -> Result<Vec<f64>> {
    let n = form.n();
    let dim = 2 * n;
    let m = HermitianMatrix::from_real_row_major(dim, form.matrix())?;
    let eig = eig_hermitian(&m, true)?;
    let smallest = eig.values[0];
    let scale = eig.values[dim - 1].abs().max(1.0);
    if !(smallest > 1e-12 * scale) {
        return Err(Error::NotPositiveDefinite { smallest });
    }

    let mut sqrt_m = vec![0.0; dim * dim];
    for k in 0..dim {
        let s = eig.values[k].sqrt();
        let v = eig.vector(k);
        for i in 0..dim {
            for j in 0..dim {
                sqrt_m[i * dim + j] += s * v[i].re * v[j].re + s * v[i].im * v[j].im;
            }
        }
    }

    let mut j = vec![0.0; dim * dim];
    for i in 0..n {
        j[i * dim + (n + i)] = -1.0;
        j[(n + i) * dim + i] = 1.0;
    }
    let k = real_matmul(&real_matmul(&sqrt_m, &j, dim), &sqrt_m, dim);
    let mut ktk = vec![0.0; dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            ktk[a * dim + b] = (0..dim).map(|c| k[c * dim + a] * k[c * dim + b]).sum();
        }
    }
    let g = HermitianMatrix::from_real_row_major(dim, &ktk)?;
    let mut g = g;
    g.hermitize();
    let squares = eig_hermitian(&g, false)?.values;

    Ok((0..n)
        .map(|p| (0.5 * (squares[2 * p] + squares[2 * p + 1])).max(0.0).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_is_sqrt_det() {
        let q = QuadraticForm::diagonal(&[1.0, 4.0]).unwrap();
        let s = symplectic_spectrum(&q).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-13);

        let q = QuadraticForm::new(1, vec![2.0, 0.5, 0.5, 3.0]).unwrap();
        let s = symplectic_spectrum(&q).unwrap();
        assert!((s[0] - (6.0f64 - 0.25).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn identity_forms() {
        let s = symplectic_spectrum(&QuadraticForm::diagonal(&[1.0, 1.0]).unwrap()).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14);
        let s = symplectic_spectrum(&QuadraticForm::diagonal(&[1.0; 4]).unwrap()).unwrap();
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn rejects_indefinite() {
        let q = QuadraticForm::diagonal(&[1.0, -2.0]).unwrap();
        match symplectic_spectrum(&q) {
            Err(Error::NotPositiveDefinite { smallest }) => assert!((smallest + 2.0).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
    }
}
