use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{Rotation, SpherePoint, SpinBasis};
use crate::numerics::gauss_legendre;
use crate::{Error, QuantumState, Result, C64};

/// Coherent-state density of a spin state, normalized to unit mass under
/// `dA / 4 pi`. At the chart point `w` it equals
/// `(N+1) |sum_k c_k sqrt(binom(N,k)) w^k|^2 (1 + |w|^2)^{-N}`.
#[derive(Debug, Clone)]
pub struct Husimi {
    basis: SpinBasis,
    coeffs: Vec<C64>,
}

impl Husimi {
    /// Normalizes `state`; the zero state is rejected.
    pub fn new(state: &QuantumState) -> Result<Self> {
        if state.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: state.len(),
            });
        }
        let state = state.normalized()?;
        Ok(Self {
            basis: SpinBasis::new(state.len() - 1),
            coeffs: state.into_coeffs(),
        })
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn density(&self, p: &SpherePoint) -> f64 {
        self.basis.evaluate(&self.coeffs, p).norm_sqr()
    }

    pub fn density_at_chart(&self, w: C64) -> f64 {
        self.density(&SpherePoint::from_chart(w))
    }

    /// Mass in the polar band `u in [u0, u1]` of the frame where `frame`
    /// maps the north pole to the band's axis. Exact: after the azimuthal
    /// average the density is a polynomial of degree `N` in `u`.
    fn band_mass(&self, frame: &Rotation, u0: f64, u1: f64) -> f64 {
        let n = self.n();
        let rule = gauss_legendre(n / 2 + 2).on_interval(u0, u1);
        let m = 2 * n + 2;
        let mut total = 0.0;
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = (1.0 - u * u).max(0.0).sqrt();
            let mut ring = 0.0;
            for j in 0..m {
                let (sp, cp) = (2.0 * PI * j as f64 / m as f64).sin_cos();
                let local = SpherePoint::from_xyz_unchecked(s * cp, s * sp, u);
                ring += self.density(&frame.apply(&local));
            }
            total += w * ring / m as f64;
        }
        0.5 * total
    }

    /// Total mass by the same exact rule; 1 up to round-off.
    pub fn integral(&self) -> f64 {
        self.band_mass(&Rotation::IDENTITY, -1.0, 1.0)
    }

    /// Mass inside the geodesic cap of radius `r` about `center`.
    pub fn cap_mass(&self, center: &SpherePoint, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.band_mass(&Rotation::taking_north_to(center), r.cos(), 1.0))
    }

    /// Mass outside the same cap, integrated directly over the complement.
    pub fn outside_mass(&self, center: &SpherePoint, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.band_mass(&Rotation::taking_north_to(center), -1.0, r.cos()))
    }
}

/// Husimi density of `state` at each point.
pub fn husimi(state: &QuantumState, points: &[SpherePoint]) -> Result<Vec<f64>> {
    let h = Husimi::new(state)?;
    Ok(points.iter().map(|p| h.density(p)).collect())
}

pub fn husimi_integral(state: &QuantumState) -> Result<f64> {
    Ok(Husimi::new(state)?.integral())
}

pub fn cap_mass(state: &QuantumState, center: &SpherePoint, r: f64) -> Result<f64> {
    Husimi::new(state)?.cap_mass(center, r)
}

pub fn outside_cap_mass(state: &QuantumState, center: &SpherePoint, r: f64) -> Result<f64> {
    Husimi::new(state)?.outside_mass(center, r)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < PI) {
        return Err(Error::OutOfRange(format!("cap radius {r} outside (0, pi)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(n: usize) -> QuantumState {
        QuantumState::basis_vector(n + 1, 0)
    }

    #[test]
    fn coherent_state_peaks_at_poles() {
        let n = 10;
        let pts = [
            SpherePoint::NORTH,
            SpherePoint::from_angles(0.5, 1.0),
            SpherePoint::SOUTH,
        ];
        let d = husimi(&ground(n), &pts).unwrap();
        assert!((d[0] - 11.0).abs() < 1e-12);
        assert!(d[0] > d[1] && d[1] > d[2]);
        // (N+1)(1+|w|^2)^{-N}
        let w = C64::new(0.4, 0.3);
        let h = Husimi::new(&ground(n)).unwrap();
        assert!((h.density_at_chart(w) - 11.0 * (1.25f64).powi(-10)).abs() < 1e-12);

        let top = QuantumState::basis_vector(n + 1, n);
        let d = husimi(&top, &pts).unwrap();
        assert!(d[2] > d[1] && d[1] > d[0]);
    }

    #[test]
    fn unit_mass() {
        let coeffs: Vec<C64> = (0..=17)
            .map(|k| C64::new((k as f64).sin(), (0.3 * k as f64).cos()))
            .collect();
        let s = QuantumState::new(coeffs);
        assert!((husimi_integral(&s).unwrap() - 1.0).abs() < 1e-10);
        assert!(matches!(
            husimi_integral(&QuantumState::new(alloc::vec![C64::new(0.0, 0.0); 4])),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn hemisphere_of_coherent_state() {
        // Closed form: mass of (N+1)((1+u)/2)^N over u in [0,1] is 1 - 2^{-(N+1)}.
        let mut prev = 0.0;
        for n in [1usize, 4, 16, 64] {
            let m = cap_mass(&ground(n), &SpherePoint::NORTH, PI / 2.0).unwrap();
            let want = 1.0 - 0.5f64.powi(n as i32 + 1);
            assert!((m - want).abs() < 1e-12);
            assert!(m > 0.5 && m >= prev - 1e-15);
            prev = m;
        }
    }

    #[test]
    fn caps_and_complements() {
        let coeffs: Vec<C64> = (0..=12)
            .map(|k| C64::new(1.0 / (k as f64 + 1.0), 0.1 * k as f64))
            .collect();
        let s = QuantumState::new(coeffs);
        let c = SpherePoint::from_angles(1.0, 2.0);
        let mut prev = 0.0;
        for r in [0.1, 0.5, 1.0, 2.0, 3.0, PI - 1e-9] {
            let inside = cap_mass(&s, &c, r).unwrap();
            let outside = outside_cap_mass(&s, &c, r).unwrap();
            assert!((inside + outside - 1.0).abs() < 1e-10);
            assert!(inside >= prev - 1e-14);
            prev = inside;
        }
        assert!((prev - 1.0).abs() < 1e-10);
        assert!(cap_mass(&s, &c, 0.0).is_err());
        assert!(cap_mass(&s, &c, PI).is_err());
    }

    #[test]
    fn antipodal_state_misses_cap() {
        let n = 64;
        let m = outside_cap_mass(&QuantumState::basis_vector(n + 1, n), &SpherePoint::NORTH, 1.0).unwrap();
        assert!((m - 1.0).abs() < 1e-6);
    }
}
