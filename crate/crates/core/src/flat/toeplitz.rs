use core::f64::consts::PI;

use num_traits::Float;

use super::{FlatSymbol, FockBasis};
use crate::numerics::{gauss_legendre, HermitianMatrix};
use crate::{Error, Result, C64};

/// Matrix of `T_1(h)` on the truncated Fock basis.
///
/// For `z^a zbar^b` the entry between `e_mu` (row) and `e_nu` (column) is
/// `(nu + a)! / sqrt(mu! nu!)` when `mu = nu + a - b`, factorials taken
/// componentwise. Couplings leaving the truncation are dropped.
pub fn toeplitz_flat(h: &FlatSymbol, basis: &FockBasis) -> Result<HermitianMatrix> {
    check_dims(h, basis)?;
    let dim = basis.len();
    let mut out = HermitianMatrix::zeros(dim);
    let mut mu = alloc::vec![0u32; basis.n()];
    for (a, b, c) in h.terms() {
        for col in 0..dim {
            let nu = basis.multi_index(col);
            if !shift(nu, a, b, &mut mu) {
                continue;
            }
            let Some(row) = basis.index_of(&mu) else {
                continue;
            };
            let mut up = 1.0;
            let mut down = 1.0;
            for j in 0..nu.len() {
                let top = nu[j] + a[j];
                up *= falling(top, a[j]);
                down *= falling(top, b[j]);
            }
            out[(row, col)] += c * (up * down).sqrt();
        }
    }
    out.hermitize();
    Ok(out)
}

/// Matrix of `T_N(h)` on the orthonormal basis of the space with weight
/// `e^{-N|z|^2}`, assembled from the Gaussian moments
/// `int |z|^{2p} e^{-N|z|^2} = pi p! / N^{p+1}`.
pub fn toeplitz_flat_scaled(h: &FlatSymbol, basis: &FockBasis, big_n: f64) -> Result<HermitianMatrix> {
    check_dims(h, basis)?;
    if !(big_n > 0.0) {
        return Err(Error::OutOfRange(alloc::format!("N must be positive, got {big_n}")));
    }
    let dim = basis.len();
    let norm1 = |k: u32| -> f64 { (big_n.powi(k as i32 + 1) / (PI * factorial(k))).sqrt() };
    let moment = |p: u32| -> f64 { PI * factorial(p) / big_n.powi(p as i32 + 1) };

    let mut out = HermitianMatrix::zeros(dim);
    let mut mu = alloc::vec![0u32; basis.n()];
    for (a, b, c) in h.terms() {
        for col in 0..dim {
            let nu = basis.multi_index(col);
            if !shift(nu, a, b, &mut mu) {
                continue;
            }
            let Some(row) = basis.index_of(&mu) else {
                continue;
            };
            let mut w = 1.0;
            for j in 0..nu.len() {
                w *= norm1(mu[j]) * norm1(nu[j]) * moment(nu[j] + a[j]);
            }
            out[(row, col)] += c * w;
        }
    }
    out.hermitize();
    Ok(out)
}

/// Projector kernel `(N/pi)^n exp(-N|x|^2/2 - N|y|^2/2 + N x . conj(y))`.
pub fn bargmann_kernel(x: &[C64], y: &[C64], big_n: f64) -> C64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as i32;
    let mut expo = C64::new(0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        expo += -0.5 * big_n * xi.norm_sqr() - 0.5 * big_n * yi.norm_sqr() + big_n * xi * yi.conj();
    }
    (big_n / PI).powi(n) * expo.exp()
}

/// `e_nu(z) = z^nu e^{-|z|^2/2} / sqrt(pi^n nu!)`, the unit-normalized basis
/// function with the weight folded in.
pub fn basis_function(nu: &[u32], z: &[C64]) -> C64 {
    nu.iter().zip(z).fold(C64::new(1.0, 0.0), |acc, (&k, &zj)| {
        acc * zj.powu(k) * (-0.5 * zj.norm_sqr()).exp() / (PI * factorial(k)).sqrt()
    })
}

/// `int Pi_1(z, w) e_nu(w) dw` over a polydisk of the given radius. The
/// integrand factorizes over coordinates; each factor uses Gauss-Legendre in
/// the radius and the trapezoid rule in the angle.
pub fn reproduce_by_quadrature(nu: &[u32], z: &[C64], radius: f64, radial_nodes: usize, angular_nodes: usize) -> C64 {
    let rule = gauss_legendre(radial_nodes).on_interval(0.0, radius);
    let dtheta = 2.0 * PI / angular_nodes as f64;
    let mut total = C64::new(1.0, 0.0);
    for (&k, &zj) in nu.iter().zip(z) {
        let mut acc = C64::new(0.0, 0.0);
        for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
            let mut ring = C64::new(0.0, 0.0);
            for t in 0..angular_nodes {
                let w = C64::from_polar(r, t as f64 * dtheta);
                ring += bargmann_kernel(&[zj], &[w], 1.0) * basis_function(&[k], &[w]);
            }
            acc += ring * (wr * r * dtheta);
        }
        total *= acc;
    }
    total
}

/// `mu = nu + a - b`; false when a component goes negative.
fn shift(nu: &[u32], a: &[u32], b: &[u32], mu: &mut [u32]) -> bool {
    for j in 0..nu.len() {
        let top = nu[j] + a[j];
        if top < b[j] {
            return false;
        }
        mu[j] = top - b[j];
    }
    true
}

/// `top! / (top - len)!`.
fn falling(top: u32, len: u32) -> f64 {
    (top - len + 1..=top).fold(1.0, |acc, t| acc * t as f64)
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, t| acc * t as f64)
}

fn check_dims(h: &FlatSymbol, basis: &FockBasis) -> Result<()> {
    if h.n() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            got: h.n(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_hermitian;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// Brute-force Gaussian moment `int z^p zbar^q e^{-|z|^2} dA` by polar
    /// quadrature, the oracle for the closed-form matrix entries.
    fn moment_by_quadrature(p: u32, q: u32) -> C64 {
        let rule = gauss_legendre(80).on_interval(0.0, 9.0);
        let m = 64;
        let mut acc = C64::new(0.0, 0.0);
        for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
            for t in 0..m {
                let z = C64::from_polar(r, 2.0 * PI * t as f64 / m as f64);
                acc += z.powu(p) * z.conj().powu(q) * (-r * r).exp() * (w * r * 2.0 * PI / m as f64);
            }
        }
        acc
    }

    #[test]
    fn harmonic_symbol_is_diagonal() {
        // Oracle: the Gaussian moments give <e_k, |z|^2 e_k> = (k+1)! / k!.
        for k in 0..4u32 {
            let m = moment_by_quadrature(k + 1, k + 1) / moment_by_quadrature(k, k);
            assert!((m - re(k as f64 + 1.0)).norm() < 1e-10);
        }
        let t = toeplitz_flat(&FlatSymbol::harmonic(1), &FockBasis::new(1, 3)).unwrap();
        assert_eq!(t, HermitianMatrix::from_diagonal(&[1.0, 2.0, 3.0, 4.0]));
    }

    #[test]
    fn zero_symbol() {
        let t = toeplitz_flat(&FlatSymbol::zero(2), &FockBasis::new(2, 3)).unwrap();
        assert_eq!(t.max_abs(), 0.0);
    }

    #[test]
    fn holomorphic_square() {
        let h = FlatSymbol::hermitian_pair(&[2], &[0], re(0.5)).unwrap();
        let t = toeplitz_flat(&h, &FockBasis::new(1, 2)).unwrap();
        let s = 2f64.sqrt() / 2.0;
        for i in 0..3 {
            for j in 0..3 {
                let want = if (i, j) == (2, 0) || (i, j) == (0, 2) { s } else { 0.0 };
                assert!((t[(i, j)] - re(want)).norm() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn entries_match_quadrature_oracle() {
        // <e_mu, z^a zbar^b e_nu> with a = 2, b = 1: mu = nu + 1.
        let h = FlatSymbol::hermitian_pair(&[2], &[1], re(1.0)).unwrap();
        let t = toeplitz_flat(&h, &FockBasis::new(1, 5)).unwrap();
        for nu in 0..4u32 {
            let mu = nu + 1;
            let num = moment_by_quadrature(nu + 2, mu + 1);
            let norm = (moment_by_quadrature(mu, mu).re * moment_by_quadrature(nu, nu).re).sqrt();
            let want = num / norm;
            assert!((t[(mu as usize, nu as usize)] - want).norm() < 1e-9);
        }
    }

    #[test]
    fn odd_symbols_have_zero_diagonal() {
        let h = FlatSymbol::hermitian_pair(&[2, 0], &[0, 1], re(0.3))
            .unwrap()
            .add(&FlatSymbol::hermitian_pair(&[0, 3], &[0, 0], C64::new(0.1, 0.2)).unwrap());
        let t = toeplitz_flat(&h, &FockBasis::new(2, 6)).unwrap();
        assert!(t.diagonal().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn scaled_matrix_is_scaled() {
        let q = super::super::QuadraticForm::diagonal(&[1.0, 4.0]).unwrap().to_symbol();
        let basis = FockBasis::new(1, 12);
        let t1 = toeplitz_flat(&q, &basis).unwrap();
        for big_n in [2.0, 5.0, 10.0] {
            let tn = toeplitz_flat_scaled(&q, &basis, big_n).unwrap();
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    assert!((tn[(i, j)] - t1[(i, j)] / big_n).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let k = bargmann_kernel(&[re(0.0)], &[re(0.0)], 3.0);
        assert!((k - re(3.0 / PI)).norm() < 1e-15);
        let x = [C64::new(0.3, -1.2), C64::new(2.0, 0.5)];
        let k = bargmann_kernel(&x, &x, 1.0);
        assert!((k - re(1.0 / (PI * PI))).norm() < 1e-15);

        // |Pi(x,y)|^2 = Pi(x,x) Pi(y,y) e^{-N|x-y|^2}
        let y = [C64::new(-0.4, 0.1), C64::new(1.1, 0.9)];
        let big_n = 2.5;
        let lhs = bargmann_kernel(&x, &y, big_n).norm_sqr();
        let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).norm_sqr()).sum();
        let rhs = bargmann_kernel(&x, &x, big_n).re * bargmann_kernel(&y, &y, big_n).re * (-big_n * d2).exp();
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn reproducing_property() {
        let z = [C64::new(0.4, -0.3)];
        for k in 0..=4u32 {
            let got = reproduce_by_quadrature(&[k], &z, 8.0, 80, 64);
            let want = basis_function(&[k], &z);
            assert!((got - want).norm() < 1e-6, "nu = {k}");
        }
    }

    #[test]
    fn truncated_bottom_is_monotone_in_cutoff() {
        let q = super::super::QuadraticForm::diagonal(&[1.0, 4.0]).unwrap().to_symbol();
        let mut prev = f64::INFINITY;
        for d in (10..=40).step_by(10) {
            let t = toeplitz_flat(&q, &FockBasis::new(1, d)).unwrap();
            let bottom = eig_hermitian(&t, false).unwrap().values[0];
            assert!(bottom <= prev + 1e-14);
            prev = bottom;
        }
    }
}
