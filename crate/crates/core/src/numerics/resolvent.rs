use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{eig_hermitian, inner, norm, EigenDecomposition, HermitianMatrix};
use crate::{Error, Result, C64};

/// Eigenvalues closer than this to the selected one count as degenerate.
const DEGENERACY_TOL: f64 = 1e-8;
/// Largest accepted relative overlap of an input with the kernel vector.
const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Inverse of `A - lambda` on the orthogonal complement of a simple
/// eigenvector.
#[derive(Debug, Clone)]
pub struct ReducedResolvent {
    eig: EigenDecomposition,
    index: usize,
    lambda: f64,
    kernel: Vec<C64>,
}

impl ReducedResolvent {
    pub fn new(a: &HermitianMatrix, lambda: f64, kernel_vector: &[C64]) -> Result<Self> {
        if kernel_vector.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: kernel_vector.len(),
            });
        }
        let eig = eig_hermitian(a, true)?;
        let index = eig
            .values
            .iter()
            .enumerate()
            .min_by(|x, y| (x.1 - lambda).abs().total_cmp(&(y.1 - lambda).abs()))
            .map(|(i, _)| i)
            .ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
        let distance = eig
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, v)| (v - lambda).abs())
            .fold(f64::INFINITY, f64::min);
        if distance < DEGENERACY_TOL {
            return Err(Error::DegenerateEigenvalue {
                value: lambda,
                distance,
            });
        }
        let knorm = norm(kernel_vector);
        if knorm == 0.0 {
            return Err(Error::ZeroState);
        }
        let kernel: Vec<C64> = kernel_vector.iter().map(|z| z / knorm).collect();
        let av = a.mul_vec(&kernel);
        let res = av
            .iter()
            .zip(&kernel)
            .map(|(x, y)| (x - y * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > 1e-8 * a.frobenius_norm().max(1.0) {
            return Err(Error::OutOfRange(alloc::format!(
                "kernel vector is not an eigenvector for {lambda} (residual {res:e})"
            )));
        }
        Ok(Self {
            eig,
            index,
            lambda,
            kernel,
        })
    }

    /// Solves `(A - lambda) v = w` with `v` orthogonal to the kernel.
    pub fn apply(&self, w: &[C64]) -> Result<Vec<C64>> {
        let n = self.eig.dim();
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: w.len(),
            });
        }
        let overlap = inner(&self.kernel, w).norm();
        if overlap > ORTHOGONALITY_TOL * norm(w).max(1.0) {
            return Err(Error::NotOrthogonal { overlap });
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            if j == self.index {
                continue;
            }
            let phi = self.eig.vector(j);
            let coef = inner(phi, w) / (self.eig.values[j] - self.lambda);
            for (vi, p) in v.iter_mut().zip(phi) {
                *vi += p * coef;
            }
        }
        // Remove round-off leakage along the kernel.
        let leak = inner(&self.kernel, &v);
        for (vi, k) in v.iter_mut().zip(&self.kernel) {
            *vi -= k * leak;
        }
        Ok(v)
    }

    /// Projects `w` onto the orthogonal complement of the kernel.
    pub fn project_out(&self, w: &[C64]) -> Vec<C64> {
        let c = inner(&self.kernel, w);
        w.iter().zip(&self.kernel).map(|(x, k)| x - k * c).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn diagonal_examples() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let r = ReducedResolvent::new(&a, 1.0, &real(&[1.0, 0.0, 0.0])).unwrap();
        let v = r.apply(&real(&[0.0, 1.0, 0.0])).unwrap();
        assert!(v
            .iter()
            .zip(real(&[0.0, 1.0, 0.0]))
            .all(|(x, y)| (x - y).norm() < 1e-14));
        let v = r.apply(&real(&[0.0, 0.0, 2.0])).unwrap();
        assert!(v
            .iter()
            .zip(real(&[0.0, 0.0, 1.0]))
            .all(|(x, y)| (x - y).norm() < 1e-14));
    }

    #[test]
    fn rejects_kernel_direction() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let r = ReducedResolvent::new(&a, 1.0, &real(&[1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(
            r.apply(&real(&[1.0, 0.0, 0.0])),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn rejects_degenerate_level() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 1.0 + 1e-10, 3.0]);
        assert!(matches!(
            ReducedResolvent::new(&a, 1.0, &real(&[1.0, 0.0, 0.0])),
            Err(Error::DegenerateEigenvalue { .. })
        ));
    }

    #[test]
    fn solves_dense_system() {
        let a = HermitianMatrix::from_real_row_major(3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]).unwrap();
        let dec = eig_hermitian(&a, true).unwrap();
        let r = ReducedResolvent::new(&a, dec.values[0], dec.vector(0)).unwrap();
        let w = r.project_out(&real(&[0.3, -1.0, 2.0]));
        let v = r.apply(&w).unwrap();
        let av = a.mul_vec(&v);
        for i in 0..3 {
            assert!((av[i] - v[i] * dec.values[0] - w[i]).norm() < 1e-12);
        }
        assert!(inner(dec.vector(0), &v).norm() < 1e-13);
    }
}
