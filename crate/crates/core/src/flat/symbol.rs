use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::QuadraticForm;
use crate::{Error, Result, C64};

/// Monomial `z^a zbar^b`.
pub type Exponents = (Vec<u32>, Vec<u32>);

const DROP_TOL: f64 = 1e-15;

/// Real polynomial on `C^n` written in `z, zbar`; coefficients satisfy
/// `c(a, b) = conj(c(b, a))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatSymbol {
    n: usize,
    terms: BTreeMap<Exponents, C64>,
}

impl FlatSymbol {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms and checks that the result is real-valued.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, C64)>,
    {
        let mut map: BTreeMap<Exponents, C64> = BTreeMap::new();
        for (a, b, c) in terms {
            if a.len() != n || b.len() != n {
                return Err(Error::InvalidSymbol(format!(
                    "exponent vectors must have length {n}, got {} and {}",
                    a.len(),
                    b.len()
                )));
            }
            *map.entry((a, b)).or_insert(C64::new(0.0, 0.0)) += c;
        }
        let symbol = Self { n, terms: map }.pruned();
        symbol.check_real()?;
        Ok(symbol)
    }

    /// `c z^a zbar^b + conj(c) z^b zbar^a`.
    pub fn hermitian_pair(a: &[u32], b: &[u32], c: C64) -> Result<Self> {
        let n = a.len();
        Self::from_terms(n, [(a.to_vec(), b.to_vec(), c), (b.to_vec(), a.to_vec(), c.conj())])
    }

    /// `sum_j |z_j|^2`.
    pub fn harmonic(n: usize) -> Self {
        let terms = (0..n).map(|j| {
            let mut e = vec![0u32; n];
            e[j] = 1;
            (e.clone(), e, C64::new(1.0, 0.0))
        });
        Self::from_terms(n, terms).expect("harmonic symbol is real")
    }

    /// `q(w) = w^T M w` with `w = (x, y)`, `z = x + i y`.
    pub fn from_quadratic_form(form: &QuadraticForm) -> Self {
        let n = form.n();
        // Each real coordinate as a linear form alpha . z + beta . zbar.
        let linear = |k: usize| -> (usize, C64, C64) {
            if k < n {
                (k, C64::new(0.5, 0.0), C64::new(0.5, 0.0))
            } else {
                (k - n, C64::new(0.0, -0.5), C64::new(0.0, 0.5))
            }
        };
        let mut map: BTreeMap<Exponents, C64> = BTreeMap::new();
        for k in 0..2 * n {
            for l in 0..2 * n {
                let m = form.get(k, l);
                if m == 0.0 {
                    continue;
                }
                let (jk, ak, bk) = linear(k);
                let (jl, al, bl) = linear(l);
                for (ck, zk) in [(ak, true), (bk, false)] {
                    for (cl, zl) in [(al, true), (bl, false)] {
                        let mut a = vec![0u32; n];
                        let mut b = vec![0u32; n];
                        if zk {
                            a[jk] += 1
                        } else {
                            b[jk] += 1
                        }
                        if zl {
                            a[jl] += 1
                        } else {
                            b[jl] += 1
                        }
                        *map.entry((a, b)).or_insert(C64::new(0.0, 0.0)) += ck * cl * m;
                    }
                }
            }
        }
        let mut s = Self { n, terms: map }.pruned();
        s.symmetrize();
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], C64)> {
        self.terms.iter().map(|((a, b), c)| (a.as_slice(), b.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &[u32], b: &[u32]) -> C64 {
        self.terms
            .get(&(a.to_vec(), b.to_vec()))
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| total(a) + total(b)).max().unwrap_or(0)
    }

    /// Terms of total degree exactly `degree`.
    pub fn homogeneous_part(&self, degree: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|((a, b), _)| total(a) + total(b) == degree)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "symbols live on different spaces");
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            *terms.entry(k.clone()).or_insert(C64::new(0.0, 0.0)) += v;
        }
        Self { n: self.n, terms }.pruned()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
        .pruned()
    }

    pub fn eval(&self, z: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|((a, b), c)| {
                let mut m = *c;
                for j in 0..self.n {
                    m *= z[j].powu(a[j]) * z[j].conj().powu(b[j]);
                }
                m.re
            })
            .sum()
    }

    fn check_real(&self) -> Result<()> {
        for ((a, b), c) in &self.terms {
            let partner = self.coefficient(b, a);
            let mismatch = (c - partner.conj()).norm();
            if mismatch > 1e-12 * c.norm().max(1.0) {
                return Err(Error::NonRealSymbol {
                    mismatch,
                    monomial: format!("z^{a:?} zbar^{b:?}"),
                });
            }
        }
        Ok(())
    }

    fn symmetrize(&mut self) {
        let keys: Vec<Exponents> = self.terms.keys().cloned().collect();
        for (a, b) in keys {
            if a > b {
                continue;
            }
            let c = self.coefficient(&a, &b);
            let d = self.coefficient(&b, &a);
            let avg = (c + d.conj()) * 0.5;
            if a == b {
                self.terms.insert((a, b), C64::new(avg.re, 0.0));
            } else {
                self.terms.insert((a.clone(), b.clone()), avg);
                self.terms.insert((b, a), avg.conj());
            }
        }
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() > DROP_TOL);
        self
    }
}

fn total(e: &[u32]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}
