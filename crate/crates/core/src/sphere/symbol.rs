use alloc::collections::BTreeMap;
use alloc::format;

use num_traits::Float;

use super::{Rotation, SpherePoint};
use crate::{Error, Result};

/// Exponents `(i, j, k)` of `X^i Y^j Z^k`.
pub type Monomial = (u32, u32, u32);

const DROP_TOL: f64 = 1e-15;

/// Real polynomial in the ambient coordinates `X, Y, Z`, restricted to the
/// unit sphere.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SphereSymbol {
    terms: BTreeMap<Monomial, f64>,
}

impl SphereSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([((0, 0, 0), c)]).expect("finite constant")
    }

    /// Sums repeated monomials. Non-finite coefficients are rejected.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if !c.is_finite() {
                return Err(Error::InvalidSymbol(format!(
                    "coefficient of X^{} Y^{} Z^{} is {c}",
                    m.0, m.1, m.2
                )));
            }
            *map.entry(m).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self { terms: map })
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0, 0), 1.0)]).expect("finite")
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1, 0), 1.0)]).expect("finite")
    }

    pub fn z() -> Self {
        Self::from_terms([((0, 0, 1), 1.0)]).expect("finite")
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, f64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the polynomial as written (not reduced modulo
    /// `X^2 + Y^2 + Z^2 = 1`).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j, k)| i + j + k).max().unwrap_or(0)
    }

    pub fn eval_xyz(&self, x: f64, y: f64, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j, k), &c)| c * x.powi(i as i32) * y.powi(j as i32) * z.powi(k as i32))
            .sum()
    }

    pub fn eval(&self, p: &SpherePoint) -> f64 {
        self.eval_xyz(p.x(), p.y(), p.z())
    }

    pub fn add(&self, other: &SphereSymbol) -> SphereSymbol {
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            *out.terms.entry(m).or_insert(0.0) += c;
        }
        out.pruned()
    }

    pub fn scaled(&self, s: f64) -> SphereSymbol {
        SphereSymbol {
            terms: self.terms.iter().map(|(&m, &c)| (m, c * s)).collect(),
        }
        .pruned()
    }

    pub fn mul(&self, other: &SphereSymbol) -> SphereSymbol {
        let mut out = BTreeMap::new();
        for (&(a, b, c), &x) in &self.terms {
            for (&(d, e, f), &y) in &other.terms {
                *out.entry((a + d, b + e, c + f)).or_insert(0.0) += x * y;
            }
        }
        SphereSymbol { terms: out }.pruned()
    }

    pub fn powu(&self, k: u32) -> SphereSymbol {
        (0..k).fold(Self::constant(1.0), |acc, _| acc.mul(self))
    }

    /// `h(R v)`: substitutes each coordinate by the matching row of `R`.
    pub fn rotate(&self, r: &Rotation) -> SphereSymbol {
        let m = r.matrix();
        let row = |i: usize| {
            SphereSymbol::from_terms([((1, 0, 0), m[i][0]), ((0, 1, 0), m[i][1]), ((0, 0, 1), m[i][2])])
                .expect("finite rotation")
        };
        let (rx, ry, rz) = (row(0), row(1), row(2));
        let mut out = SphereSymbol::zero();
        for (&(i, j, k), &c) in &self.terms {
            let t = rx.powu(i).mul(&ry.powu(j)).mul(&rz.powu(k)).scaled(c);
            out = out.add(&t);
        }
        out
    }

    /// `(1 / 4 pi) int_{S^2} h dA`, from `<X^i Y^j Z^k>`: zero unless all
    /// exponents are even, else `(i-1)!! (j-1)!! (k-1)!! / (i+j+k+1)!!`.
    pub fn sphere_average(&self) -> f64 {
        let dfact = |n: i64| -> f64 {
            let mut acc = 1.0;
            let mut t = n;
            while t > 1 {
                acc *= t as f64;
                t -= 2;
            }
            acc
        };
        self.terms
            .iter()
            .filter(|(&(i, j, k), _)| i % 2 == 0 && j % 2 == 0 && k % 2 == 0)
            .map(|(&(i, j, k), &c)| {
                let (i, j, k) = (i as i64, j as i64, k as i64);
                c * dfact(i - 1) * dfact(j - 1) * dfact(k - 1) / dfact(i + j + k + 1)
            })
            .sum()
    }

    fn pruned(mut self) -> Self {
        let scale = self.terms.values().fold(0.0f64, |a, c| a.max(c.abs()));
        self.terms.retain(|_, c| c.abs() > DROP_TOL * scale.max(1.0));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn asymmetric() -> SphereSymbol {
        // X^2 + 4 Y^2 + (1 - Z)(X^2 + Y^2)
        SphereSymbol::from_terms([((2, 0, 0), 2.0), ((0, 2, 0), 5.0), ((2, 0, 1), -1.0), ((0, 2, 1), -1.0)]).unwrap()
    }

    #[test]
    fn half_turn_about_x_flips_z() {
        let r = Rotation::about_axis([1.0, 0.0, 0.0], PI).unwrap();
        let h = SphereSymbol::z().rotate(&r);
        assert_eq!(h.terms().count(), 1);
        assert!((h.coefficient((0, 0, 1)) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_rotation_is_exact() {
        let h = asymmetric();
        assert_eq!(h.rotate(&Rotation::IDENTITY), h);
    }

    #[test]
    fn rotation_matches_pointwise_evaluation() {
        let h = asymmetric();
        let r = Rotation::about_axis([0.3, -1.0, 0.2], 1.3).unwrap();
        let g = h.rotate(&r);
        assert_eq!(g.degree(), h.degree());
        for (t, p) in [(0.2, 0.1), (1.7, -2.0), (2.9, 0.5)] {
            let q = SpherePoint::from_angles(t, p);
            assert!((g.eval(&q) - h.eval(&r.apply(&q))).abs() < 1e-13);
        }
    }

    #[test]
    fn averages() {
        assert!((SphereSymbol::z().powu(2).sphere_average() - 1.0 / 3.0).abs() < 1e-15);
        assert!((asymmetric().sphere_average() - (2.0 + 5.0) / 3.0).abs() < 1e-15);
        let x2y2 = SphereSymbol::from_terms([((2, 2, 0), 1.0)]).unwrap();
        assert!((x2y2.sphere_average() - 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nan() {
        assert!(SphereSymbol::from_terms([((1, 0, 0), f64::NAN)]).is_err());
    }
}
