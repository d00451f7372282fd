use alloc::vec::Vec;

use num_traits::Float;

use super::SpherePoint;
use crate::numerics::ln_factorials;
use crate::C64;

/// Orthonormal basis `psi_k`, `k = 0..=N`, of the degree-`N` spin space,
/// written against the normalized area measure `dA / 4 pi`.
///
/// In the chart `w = (X + iY) / (1 + Z)` the section `psi_k` is
/// `sqrt((N+1) binom(N, k)) w^k (1 + |w|^2)^{-N/2}`, so `psi_0` peaks at the
/// north pole and `psi_N` at the south pole. With `u = cos(theta)`,
/// `|psi_k| = sqrt((N+1) binom(N,k)) ((1-u)/2)^{k/2} ((1+u)/2)^{(N-k)/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBasis {
    n: usize,
    ln_norm: Vec<f64>,
}

impl SpinBasis {
    pub fn new(n: usize) -> Self {
        let lf = ln_factorials(n);
        let ln_n1 = ((n + 1) as f64).ln();
        let ln_norm = (0..=n).map(|k| 0.5 * (ln_n1 + lf[n] - lf[k] - lf[n - k])).collect();
        Self { n, ln_norm }
    }

    /// The spin parameter `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `N + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|psi_k|` at `u = cos(theta)` for every `k`, evaluated in log space.
    pub fn profiles(&self, u: f64) -> Vec<f64> {
        let a = (0.5 * (1.0 - u)).max(0.0).ln();
        let b = (0.5 * (1.0 + u)).max(0.0).ln();
        let n = self.n;
        (0..=n)
            .map(|k| {
                let mut e = self.ln_norm[k];
                if k > 0 {
                    e += 0.5 * k as f64 * a;
                }
                if k < n {
                    e += 0.5 * (n - k) as f64 * b;
                }
                e.exp()
            })
            .collect()
    }

    /// `sum_k c_k psi_k(p)`.
    pub fn evaluate(&self, coeffs: &[C64], p: &SpherePoint) -> C64 {
        let (u, phi) = p.polar();
        let step = C64::from_polar(1.0, phi);
        let mut phase = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        for (c, g) in coeffs.iter().zip(self.profiles(u)) {
            acc += c * phase * g;
            phase *= step;
        }
        acc
    }
}
