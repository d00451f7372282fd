//! Rayleigh-Schrodinger expansion of the bottom of
//! `T_1(q) + eps T_1(r3) + eps^2 T_1(r4)`, `eps = N^{-1/2}`, on the truncated
//! Fock basis.

use alloc::vec::Vec;

use super::{toeplitz_flat, FlatSymbol, FockBasis};
use crate::numerics::{eig_hermitian, inner, HermitianMatrix, ReducedResolvent};
use crate::{Error, QuantumState, Result, C64};

/// Eigenvalues within this distance belong to the same level.
pub const LEVEL_TOL: f64 = 1e-8;
/// Ground-state weight on the top two degrees above which a truncation is
/// flagged.
pub const TAIL_TOL: f64 = 1e-12;

/// A flat symbol split into its quadratic, cubic and quartic parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSymbol {
    pub q: FlatSymbol,
    pub r3: FlatSymbol,
    pub r4: FlatSymbol,
}

impl SplitSymbol {
    /// Rejects symbols with terms of degree 0, 1 or above 4.
    pub fn new(h: &FlatSymbol) -> Result<Self> {
        if h.terms().any(|(a, b, _)| {
            let d: u32 = a.iter().chain(b).sum();
            !(2..=4).contains(&d)
        }) {
            return Err(Error::InvalidSymbol(
                "perturbation input must only have terms of degree 2, 3 and 4".into(),
            ));
        }
        Ok(Self {
            q: h.homogeneous_part(2),
            r3: h.homogeneous_part(3),
            r4: h.homogeneous_part(4),
        })
    }

    /// `q + eps r3 + eps^2 r4`.
    pub fn at(&self, eps: f64) -> FlatSymbol {
        self.q.add(&self.r3.scaled(eps)).add(&self.r4.scaled(eps * eps))
    }
}

#[derive(Debug, Clone)]
pub struct PerturbationExpansion {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub u0: QuantumState,
    pub u1: QuantumState,
    /// Weight of `u0` on the two highest truncation degrees.
    pub tail_mass: f64,
}

impl PerturbationExpansion {
    pub fn tail_warning(&self) -> bool {
        self.tail_mass >= TAIL_TOL
    }

    /// `N lambda(N) ~ lambda0 + lambda2 / N`.
    pub fn predicted_scaled(&self, big_n: f64) -> f64 {
        self.lambda0 + self.lambda2 / big_n
    }

    /// `lambda(N) = N^{-1} (lambda0 + N^{-1} lambda2)`.
    pub fn predicted(&self, big_n: f64) -> f64 {
        self.predicted_scaled(big_n) / big_n
    }
}

/// Solves the first orders of `(Q - lambda0) u_k + sum_j J_j u_{k-j} = sum_j lambda_j u_{k-j}`
/// with `Q = T(q)`, `J_1 = T(r3)`, `J_2 = T(r4)`.
pub fn perturbation_expansion(h: &SplitSymbol, basis: &FockBasis) -> Result<PerturbationExpansion> {
    let q = toeplitz_flat(&h.q, basis)?;
    let j1 = toeplitz_flat(&h.r3, basis)?;
    let j2 = toeplitz_flat(&h.r4, basis)?;

    let eig = eig_hermitian(&q, true)?;
    let lambda0 = eig.values[0];
    if eig.values.len() > 1 && eig.values[1] - lambda0 < LEVEL_TOL {
        return Err(Error::DegenerateEigenvalue {
            value: lambda0,
            distance: eig.values[1] - lambda0,
        });
    }
    let u0: Vec<C64> = fix_phase(eig.vector(0));

    let j1u0 = j1.mul_vec(&u0);
    let lambda1 = inner(&u0, &j1u0).re;

    let resolvent = ReducedResolvent::new(&q, lambda0, &u0)?;
    let rhs = resolvent.project_out(&j1u0);
    let u1: Vec<C64> = resolvent.apply(&rhs)?.into_iter().map(|z| -z).collect();

    let lambda2 = inner(&u0, &j2.mul_vec(&u0)).re + inner(&u0, &j1.mul_vec(&u1)).re;

    let u0 = QuantumState::new(u0);
    let tail_mass = basis.tail_mass(&u0);
    Ok(PerturbationExpansion {
        lambda0,
        lambda1,
        lambda2,
        u0,
        u1: QuantumState::new(u1),
        tail_mass,
    })
}

#[derive(Debug, Clone)]
pub struct DegenerateBranch {
    pub vector: QuantumState,
    /// First-order splitting `b_i`: the level moves as `N^{-1} lambda + N^{-3/2} b_i`.
    pub splitting: f64,
}

/// Diagonalizes the compression of `T(r3)` to a degenerate eigenspace of
/// `T(q)`. `indices` select positions in the ascending truncated spectrum.
pub fn degenerate_first_order(h: &SplitSymbol, basis: &FockBasis, indices: &[usize]) -> Result<Vec<DegenerateBranch>> {
    let q = toeplitz_flat(&h.q, basis)?;
    let j1 = toeplitz_flat(&h.r3, basis)?;
    let eig = eig_hermitian(&q, true)?;

    let Some(&first) = indices.first() else {
        return Err(Error::EigenspaceMismatch { requested: 0, found: 0 });
    };
    if let Some(&bad) = indices.iter().find(|&&i| i >= eig.values.len()) {
        return Err(Error::OutOfRange(alloc::format!(
            "eigenvalue index {bad} beyond truncation of size {}",
            eig.values.len()
        )));
    }
    let level = eig.values[first];
    let found: Vec<usize> = (0..eig.values.len())
        .filter(|&i| (eig.values[i] - level).abs() < LEVEL_TOL)
        .collect();
    if found.len() < 2 {
        return Err(Error::NotDegenerate { value: level });
    }
    let mut requested: Vec<usize> = indices.to_vec();
    requested.sort_unstable();
    requested.dedup();
    if requested != found {
        return Err(Error::EigenspaceMismatch {
            requested: indices.len(),
            found: found.len(),
        });
    }

    let d = found.len();
    let mut compression = HermitianMatrix::zeros(d);
    for (a, &i) in found.iter().enumerate() {
        let ji = j1.mul_vec(eig.vector(i));
        for (b, &k) in found.iter().enumerate() {
            compression[(b, a)] = inner(eig.vector(k), &ji);
        }
    }
    compression.hermitize();
    let small = eig_hermitian(&compression, true)?;

    let dim = basis.len();
    Ok((0..d)
        .map(|s| {
            let coeffs = small.vector(s);
            let mut v = alloc::vec![C64::new(0.0, 0.0); dim];
            for (c, &i) in coeffs.iter().zip(&found) {
                for (vi, e) in v.iter_mut().zip(eig.vector(i)) {
                    *vi += e * c;
                }
            }
            DegenerateBranch {
                vector: QuantumState::new(v),
                splitting: small.values[s],
            }
        })
        .collect())
}

/// Rotates the global phase so the largest component is real positive.
fn fix_phase(v: &[C64]) -> Vec<C64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 {
        pivot.conj() / pivot.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    v.iter().map(|z| z * phase).collect()
}
