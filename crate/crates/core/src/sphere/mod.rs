//! Spin model over the two-sphere: Toeplitz matrices of polynomial symbols
//! in `X, Y, Z`, coherent-state densities, and well Hessians.
//!
//! The chart `w = (X + iY) / (1 + Z)` puts the north pole `Z = +1` at
//! `w = 0`. Other points are handled by rotating them to the north pole.

mod basis;
mod geometry;
mod husimi;
mod symbol;
mod toeplitz;
mod wells;

pub use basis::SpinBasis;
pub use geometry::{Rotation, SpherePoint, UNIT_TOL};
pub use husimi::{cap_mass, husimi, husimi_integral, outside_cap_mass, Husimi};
pub use symbol::{Monomial, SphereSymbol};
pub use toeplitz::toeplitz_sphere;
pub use wells::{
    find_wells, grid_minimum, well_hessian, Well, WellSet, NONNEGATIVE_TOL, RESONANCE_TOL, WELL_GRADIENT_TOL,
    WELL_VALUE_TOL,
};

/// `h(R v)`.
pub fn rotate_symbol(h: &SphereSymbol, r: &Rotation) -> SphereSymbol {
    h.rotate(r)
}
