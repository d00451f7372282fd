use alloc::vec;
use alloc::vec::Vec;

use crate::numerics::{inner, norm};
use crate::{Error, Result, C64};

/// Coefficient vector over an orthonormal basis (Fock or spin).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    coeffs: Vec<C64>,
}

impl QuantumState {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn basis_vector(dim: usize, index: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); dim];
        coeffs[index] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coeffs)
    }

    pub fn inner(&self, other: &QuantumState) -> C64 {
        inner(&self.coeffs, &other.coeffs)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            coeffs: self.coeffs.iter().map(|z| z / n).collect(),
        })
    }
}
