use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{SphereSymbol, SpinBasis};
use crate::numerics::{gauss_legendre, HermitianMatrix};
use crate::{Error, Result, C64};

/// Matrix of `T_N(h)` on the spin basis: entries `int h conj(psi_k) psi_l`
/// over the normalized area measure.
///
/// The azimuthal integral is a uniform `2N + 2d + 2` point rule, the polar
/// one Gauss-Legendre in `u = cos(theta)` with `N + d + 2` nodes. For a
/// polynomial symbol of degree `d` both are exact, so the entries carry only
/// round-off. `h` has no Fourier modes above `d`, so only the band
/// `|k - l| <= d` is filled.
pub fn toeplitz_sphere(h: &SphereSymbol, n: usize) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let d = h.degree() as usize;
    let band = d.min(n);
    let rule = gauss_legendre(n + d + 2);
    let m = 2 * n + 2 * d + 2;
    let basis = SpinBasis::new(n);

    let angles: Vec<(f64, f64)> = (0..m).map(|j| (2.0 * PI * j as f64 / m as f64).sin_cos()).collect();
    let mut t = HermitianMatrix::zeros(n + 1);
    let mut modes = vec![C64::new(0.0, 0.0); band + 1];
    let mut samples = vec![0.0; m];

    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let s = (1.0 - u * u).max(0.0).sqrt();
        for (v, &(sp, cp)) in samples.iter_mut().zip(&angles) {
            *v = h.eval_xyz(s * cp, s * sp, u);
        }
        // h_f = mean_j h(phi_j) e^{-i f phi_j}
        for (f, mode) in modes.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let (sn, cs) = angles[(f * j) % m];
                acc += C64::new(v * cs, -v * sn);
            }
            *mode = acc / m as f64;
        }
        let g = basis.profiles(u);
        for l in 0..=n {
            for k in l..=(l + band).min(n) {
                t[(k, l)] += modes[k - l] * (0.5 * w * g[k] * g[l]);
            }
        }
    }
    for l in 0..=n {
        for k in l + 1..=n {
            let v = t[(k, l)].conj();
            t[(l, k)] = v;
        }
        let re = t[(l, l)].re;
        t[(l, l)] = C64::new(re, 0.0);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_hermitian;
    use crate::sphere::Rotation;

    fn one_minus_z2() -> SphereSymbol {
        SphereSymbol::from_terms([((0, 0, 0), 1.0), ((0, 0, 2), -1.0)]).unwrap()
    }

    /// Beta integral oracle: `<k| ((1-u)/2)^a ((1+u)/2)^b |k>` over the
    /// normalized measure equals
    /// `(N+1) binom(N,k) B(k+a+1, N-k+b+1)`, evaluated in exact rationals via
    /// products.
    fn beta_moment(n: usize, k: usize, a: usize, b: usize) -> f64 {
        // (N+1)! / (k! (N-k)!) * (k+a)! (N-k+b)! / (N+a+b+1)!
        let mut r = 1.0;
        for t in 1..=a {
            r *= (k + t) as f64;
        }
        for t in 1..=b {
            r *= (n - k + t) as f64;
        }
        for t in 2..=(a + b + 1) {
            r /= (n + t) as f64;
        }
        r
    }

    #[test]
    fn constant_is_identity() {
        let t = toeplitz_sphere(&SphereSymbol::constant(1.0), 9).unwrap();
        let id = HermitianMatrix::identity(10);
        for i in 0..10 {
            for j in 0..10 {
                assert!((t[(i, j)] - id[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn height_is_diagonal() {
        for n in [4usize, 16, 64] {
            let t = toeplitz_sphere(&SphereSymbol::z(), n).unwrap();
            for k in 0..=n {
                // Z = (1+u)/2 - (1-u)/2
                let oracle = beta_moment(n, k, 0, 1) - beta_moment(n, k, 1, 0);
                let closed = (n as f64 - 2.0 * k as f64) / (n as f64 + 2.0);
                assert!((oracle - closed).abs() < 1e-14);
                assert!((t[(k, k)].re - closed).abs() < 1e-12);
                for l in 0..=n {
                    if l != k {
                        assert!(t[(k, l)].norm() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn x_is_tridiagonal() {
        let n = 12;
        let t = toeplitz_sphere(&SphereSymbol::x(), n).unwrap();
        assert!(t.trace().abs() < 1e-12);
        for k in 0..=n {
            for l in 0..=n {
                let want = if l == k + 1 || k == l + 1 {
                    let j = k.min(l);
                    (((j + 1) * (n - j)) as f64).sqrt() / (n as f64 + 2.0)
                } else {
                    0.0
                };
                assert!((t[(k, l)] - want).norm() < 1e-13, "({k},{l})");
            }
        }
    }

    #[test]
    fn one_minus_z2_closed_form() {
        for n in [4usize, 16, 64] {
            let t = toeplitz_sphere(&one_minus_z2(), n).unwrap();
            let nf = n as f64;
            for k in 0..=n {
                // 1 - Z^2 = 4 ((1-u)/2) ((1+u)/2)
                let oracle = 4.0 * beta_moment(n, k, 1, 1);
                let closed = 4.0 * (k as f64 + 1.0) * (nf + 1.0 - k as f64) / ((nf + 2.0) * (nf + 3.0));
                assert!((oracle - closed).abs() < 1e-14);
                assert!((t[(k, k)].re - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectrum_is_rotation_invariant() {
        let h = SphereSymbol::from_terms([((2, 0, 0), 2.0), ((0, 2, 0), 5.0), ((2, 0, 1), -1.0), ((0, 1, 1), 0.3)])
            .unwrap();
        let r = Rotation::about_axis([0.2, 1.0, -0.7], 2.1).unwrap();
        let n = 20;
        let a = eig_hermitian(&toeplitz_sphere(&h, n).unwrap(), false).unwrap();
        let b = eig_hermitian(&toeplitz_sphere(&h.rotate(&r), n).unwrap(), false).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_zero_spin() {
        assert!(toeplitz_sphere(&SphereSymbol::z(), 0).is_err());
    }

    #[test]
    fn trace_tracks_average() {
        let h = SphereSymbol::from_terms([((2, 0, 0), 2.0), ((0, 2, 0), 5.0), ((2, 0, 1), -1.0), ((0, 2, 1), -1.0)])
            .unwrap();
        let n = 128;
        let t = toeplitz_sphere(&h, n).unwrap();
        let avg = t.trace() / (n + 1) as f64;
        let want = h.sphere_average();
        assert!((avg - want).abs() < 0.02 * want.abs());
    }
}
