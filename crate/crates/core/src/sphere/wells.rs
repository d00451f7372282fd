use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{Rotation, SpherePoint, SphereSymbol};
use crate::flat::{mu_toeplitz, QuadraticForm};
use crate::numerics::gauss_legendre;
use crate::{Error, Result};

pub const WELL_VALUE_TOL: f64 = 1e-10;
pub const WELL_GRADIENT_TOL: f64 = 1e-8;
/// Slack allowed below zero when checking `h >= 0` on the grid.
pub const NONNEGATIVE_TOL: f64 = 1e-10;
/// Wells whose `mu` differ by less than this are a resonant tie.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Nondegenerate zero of a nonnegative symbol with its local harmonic model.
#[derive(Debug, Clone, PartialEq)]
pub struct Well {
    pub point: SpherePoint,
    /// Quadratic part of `h` in the chart `w = (X + iY)/(1 + Z)` centred at
    /// `point`, in the flat coordinates `w = x + iy`.
    pub hessian: QuadraticForm,
    /// Bottom of the flat model operator of `hessian`.
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellSet {
    /// Sorted by `mu`, ascending.
    pub wells: Vec<Well>,
    /// Set when the two lowest `mu` are within [`RESONANCE_TOL`].
    pub resonant: bool,
}

impl WellSet {
    /// The well of minimal `mu`.
    pub fn selected(&self) -> Option<&Well> {
        self.wells.first()
    }

    pub fn minimal(&self) -> impl Iterator<Item = &Well> {
        let best = self.wells.first().map(|w| w.mu);
        self.wells
            .iter()
            .filter(move |w| best.is_some_and(|b| w.mu - b < RESONANCE_TOL))
    }
}

/// 2-jet of `h` at `p`, obtained by rotating `p` to the north pole and
/// substituting `X = 2x`, `Y = 2y`, `Z = 1 - 2(x^2 + y^2)`.
pub fn well_hessian(h: &SphereSymbol, p: &SpherePoint) -> Result<Well> {
    let local = h.rotate(&Rotation::taking_north_to(p));
    let mut value = 0.0;
    let mut lin = [0.0f64; 2];
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for ((i, j, k), c) in local.terms() {
        match (i, j) {
            (0, 0) => {
                value += c;
                let r = -2.0 * k as f64 * c;
                xx += r;
                yy += r;
            }
            (1, 0) => lin[0] += 2.0 * c,
            (0, 1) => lin[1] += 2.0 * c,
            (2, 0) => xx += 4.0 * c,
            (1, 1) => xy += 4.0 * c,
            (0, 2) => yy += 4.0 * c,
            _ => {}
        }
    }
    // d/dx of X = 2x is 2, so the tangent gradient is half the chart one.
    let gradient = 0.5 * (lin[0] * lin[0] + lin[1] * lin[1]).sqrt();
    if !(value.abs() <= WELL_VALUE_TOL && gradient <= WELL_GRADIENT_TOL) {
        return Err(Error::NotAWell { value, gradient });
    }
    let hessian = QuadraticForm::new(1, vec![xx, 0.5 * xy, 0.5 * xy, yy])?;
    if !hessian.is_positive_definite() {
        return Err(Error::DegenerateWell {
            smallest: hessian.min_eigenvalue(),
        });
    }
    let mu = mu_toeplitz(&hessian)?;
    Ok(Well { point: *p, hessian, mu })
}

/// Smallest value of `h` on a product grid (Gauss-Legendre in `cos(theta)`
/// plus both poles, uniform in `phi`) fine enough to resolve degree `d`.
pub fn grid_minimum(h: &SphereSymbol) -> (f64, SpherePoint) {
    let d = h.degree() as usize;
    let rule = gauss_legendre(2 * d + 64);
    let m = 4 * d + 128;
    let mut us = rule.nodes.clone();
    us.push(-1.0);
    us.push(1.0);
    let mut best = (f64::INFINITY, SpherePoint::NORTH);
    for &u in &us {
        let s = (1.0 - u * u).max(0.0).sqrt();
        for j in 0..m {
            let (sp, cp) = (2.0 * PI * j as f64 / m as f64).sin_cos();
            let p = SpherePoint::from_xyz_unchecked(s * cp, s * sp, u);
            let v = h.eval(&p);
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    best
}

/// Validates user-supplied candidates. Fails globally if `h` dips below
/// `-NONNEGATIVE_TOL` on the grid and per candidate otherwise.
pub fn find_wells(h: &SphereSymbol, candidates: &[SpherePoint]) -> Result<WellSet> {
    let (min, at) = grid_minimum(h);
    if min < -NONNEGATIVE_TOL {
        return Err(Error::NegativeSymbol {
            min,
            x: at.x(),
            y: at.y(),
            z: at.z(),
        });
    }
    let mut wells = Vec::with_capacity(candidates.len());
    for (index, p) in candidates.iter().enumerate() {
        let w = well_hessian(h, p).map_err(|e| Error::CandidateRejected {
            index,
            source: Box::new(e),
        })?;
        wells.push(w);
    }
    wells.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    let resonant = wells.len() >= 2 && wells[1].mu - wells[0].mu < RESONANCE_TOL;
    Ok(WellSet { wells, resonant })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_z2() -> SphereSymbol {
        SphereSymbol::from_terms([((0, 0, 0), 1.0), ((0, 0, 2), -1.0)]).unwrap()
    }

    fn asymmetric() -> SphereSymbol {
        SphereSymbol::from_terms([((2, 0, 0), 2.0), ((0, 2, 0), 5.0), ((2, 0, 1), -1.0), ((0, 2, 1), -1.0)]).unwrap()
    }

    fn assert_diag(w: &Well, a: f64, b: f64) {
        let m = w.hessian.matrix();
        assert!((m[0] - a).abs() < 1e-12 && (m[3] - b).abs() < 1e-12, "{m:?}");
        assert!(m[1].abs() < 1e-12);
    }

    #[test]
    fn symmetric_double_well() {
        let w = well_hessian(&one_minus_z2(), &SpherePoint::NORTH).unwrap();
        assert_diag(&w, 4.0, 4.0);
        assert!((w.mu - 4.0).abs() < 1e-12);
        let set = find_wells(&one_minus_z2(), &[SpherePoint::NORTH, SpherePoint::SOUTH]).unwrap();
        assert!(set.resonant);
        assert_eq!(set.minimal().count(), 2);
        assert!(set.wells.iter().all(|w| (w.mu - 4.0).abs() < 1e-12));
    }

    #[test]
    fn asymmetric_wells() {
        let h = asymmetric();
        let north = well_hessian(&h, &SpherePoint::NORTH).unwrap();
        assert_diag(&north, 4.0, 16.0);
        assert!((north.mu - 9.0).abs() < 1e-12);
        let south = well_hessian(&h, &SpherePoint::SOUTH).unwrap();
        assert_diag(&south, 12.0, 24.0);
        let want = (12f64.sqrt() + 24f64.sqrt()).powi(2) / 4.0;
        assert!((south.mu - want).abs() < 1e-12);
        assert!((south.mu - 17.485).abs() < 1e-3);

        let set = find_wells(&h, &[SpherePoint::SOUTH, SpherePoint::NORTH]).unwrap();
        assert!(!set.resonant);
        assert_eq!(set.selected().unwrap().point, SpherePoint::NORTH);
    }

    #[test]
    fn hessian_is_chart_invariant_under_spin() {
        // Rotating h about Z by an angle rotates the chart Hessian by the same angle.
        let h = asymmetric();
        let r = Rotation::about_axis([0.0, 0.0, 1.0], 0.7).unwrap();
        let w = well_hessian(&h.rotate(&r), &SpherePoint::NORTH).unwrap();
        assert!((w.mu - 9.0).abs() < 1e-12);
        assert!((w.hessian.trace() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn rejections() {
        let h = asymmetric();
        let equator = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(well_hessian(&h, &equator), Err(Error::NotAWell { .. })));
        let r = find_wells(&h, &[SpherePoint::NORTH, equator]);
        assert!(matches!(r, Err(Error::CandidateRejected { index: 1, .. })));

        // Z^4 - 2Z^2 + 1 = (1 - Z^2)^2 vanishes to fourth order at the poles.
        let flat = one_minus_z2().powu(2);
        assert!(matches!(
            well_hessian(&flat, &SpherePoint::NORTH),
            Err(Error::DegenerateWell { .. })
        ));

        let neg = SphereSymbol::z();
        assert!(matches!(find_wells(&neg, &[]), Err(Error::NegativeSymbol { .. })));
        assert!(find_wells(&h, &[]).unwrap().wells.is_empty());
    }
}
