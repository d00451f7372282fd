//! Bargmann-space model over `C^n`: weight `e^{-N|z|^2}`, Lebesgue measure,
//! symbols as functions of `(x, y)` with `z = x + i y`.
//!
//! Under this normalization `T_1(|z|^2) = diag(k + 1)` and the bottom of
//! `T_1(alpha x^2 + beta y^2)` is `(sqrt(alpha) + sqrt(beta))^2 / 4`.

mod basis;
mod perturbation;
mod quadratic;
mod symbol;
mod toeplitz;
mod weyl;

pub use basis::FockBasis;
pub use perturbation::{
    degenerate_first_order, perturbation_expansion, DegenerateBranch, PerturbationExpansion, SplitSymbol, LEVEL_TOL,
    TAIL_TOL,
};
pub use quadratic::{model_spectrum, mu_toeplitz, QuadraticForm};
pub use symbol::{Exponents, FlatSymbol};
pub use toeplitz::{bargmann_kernel, basis_function, reproduce_by_quadrature, toeplitz_flat, toeplitz_flat_scaled};
pub use weyl::{
    bargmann_transform_check, hermite_functions, weyl_compare, weyl_quadratic, BargmannCheck, WeylComparison, WEYL_TOL,
};

use crate::numerics::eig_hermitian;
use crate::Result;

/// Smallest cutoff in `start..=max` (stepping by 2) whose bottom eigenvector
/// of `T_1(h)` keeps less than [`TAIL_TOL`] of its weight on the two top
/// degrees. Returns `max` with `false` when none qualifies.
pub fn choose_cutoff(h: &FlatSymbol, start: usize, max: usize) -> Result<(usize, bool)> {
    let mut d = start.max(2);
    loop {
        let basis = FockBasis::new(h.n(), d);
        let t = toeplitz_flat(h, &basis)?;
        let eig = eig_hermitian(&t, true)?;
        let ground = crate::QuantumState::new(eig.vector(0).to_vec());
        if basis.tail_mass(&ground) < TAIL_TOL {
            return Ok((d, true));
        }
        if d >= max {
            return Ok((max, false));
        }
        d = (d + 2).min(max);
    }
}
