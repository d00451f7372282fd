//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL with Wilkinson-style shifts.
//! Everything runs on one thread in a fixed order, so identical inputs give
//! bit-identical outputs.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{HermitianMatrix, HERMITIAN_TOL};
use crate::{Error, Result, C64};

const MAX_QL_ITERATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column-major orthonormal eigenvectors, `vectors[j * dim..(j + 1) * dim]`
    /// belongs to `values[j]`.
    vectors: Option<Vec<C64>>,
    dim: usize,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// Eigenvector for `values[j]`. Panics when vectors were not requested.
    pub fn vector(&self, j: usize) -> &[C64] {
        let v = self.vectors.as_ref().expect("eigenvectors were not computed");
        &v[j * self.dim..(j + 1) * self.dim]
    }
}

pub fn eig_hermitian(a: &HermitianMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    let (asym, row, col) = a.max_asymmetry();
    let scale = a.max_abs().max(1.0);
    if asym > HERMITIAN_TOL * scale || !asym.is_finite() {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            row,
            col,
        });
    }

    let n = a.dim();
    let mut work = a.clone();
    work.hermitize();

    let mut q = if want_vectors {
        Some(HermitianMatrix::identity(n))
    } else {
        None
    };
    tridiagonalize(&mut work, q.as_mut());

    let mut d: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let sub = work[(i + 1, i)];
        let r = sub.norm();
        e[i] = r;
        phases[i + 1] = if r > 0.0 { phases[i] * (sub / r) } else { phases[i] };
    }

    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        Some(z)
    } else {
        None
    };
    tql2(&mut d, &mut e, z.as_deref_mut());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    let vectors = match (q, z) {
        (Some(q), Some(z)) => {
            // Columns of Q D, with D the diagonal phase matrix.
            let mut qd = vec![C64::new(0.0, 0.0); n * n];
            for c in 0..n {
                for r in 0..n {
                    qd[c * n + r] = q[(r, c)] * phases[c];
                }
            }
            let mut out = vec![C64::new(0.0, 0.0); n * n];
            for (dst, &src) in order.iter().enumerate() {
                let zcol = &z[src * n..(src + 1) * n];
                let col = &mut out[dst * n..(dst + 1) * n];
                for (i, &zi) in zcol.iter().enumerate() {
                    if zi == 0.0 {
                        continue;
                    }
                    let qcol = &qd[i * n..(i + 1) * n];
                    for (o, qv) in col.iter_mut().zip(qcol) {
                        *o += qv * zi;
                    }
                }
            }
            Some(out)
        }
        _ => None,
    };

    Ok(EigenDecomposition {
        values,
        vectors,
        dim: n,
    })
}

/// Reduces `a` in place to Hermitian tridiagonal form `a = Q T Q^*`,
/// accumulating `Q` when requested.
fn tridiagonalize(a: &mut HermitianMatrix, mut q: Option<&mut HermitianMatrix>) {
    let n = a.dim();
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let alpha = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let x0_abs = x0.norm();
        let phase = if x0_abs > 0.0 { x0 / x0_abs } else { C64::new(1.0, 0.0) };
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = a[(i, k)];
        }
        v[0] += phase * alpha;
        let vv = 2.0 * alpha * (alpha + x0_abs);
        let tau = 2.0 / vv;

        // p = tau * B v on the trailing block.
        for (t, pt) in p[..m].iter_mut().enumerate() {
            let row = &a.row(k + 1 + t)[k + 1..];
            *pt = row.iter().zip(&v[..m]).fold(zero, |acc, (b, x)| acc + b * x) * tau;
        }
        let vp: f64 = v[..m].iter().zip(&p[..m]).map(|(x, y)| (x.conj() * y).re).sum();
        let kk = 0.5 * tau * vp;
        for t in 0..m {
            p[t] -= v[t] * kk;
        }
        for r in 0..m {
            for c in 0..m {
                let upd = v[r] * p[c].conj() + p[r] * v[c].conj();
                a[(k + 1 + r, k + 1 + c)] -= upd;
            }
        }

        let new_sub = -phase * alpha;
        a[(k + 1, k)] = new_sub;
        a[(k, k + 1)] = new_sub.conj();
        for i in k + 2..n {
            a[(i, k)] = zero;
            a[(k, i)] = zero;
        }

        if let Some(q) = q.as_deref_mut() {
            for r in 0..n {
                let s = (0..m).fold(zero, |acc, t| acc + q[(r, k + 1 + t)] * v[t]) * tau;
                for t in 0..m {
                    q[(r, k + 1 + t)] -= s * v[t].conj();
                }
            }
        }
    }
}

/// Implicit QL on the symmetric tridiagonal matrix with diagonal `d` and
/// subdiagonal `e` (`e[i]` couples `i` and `i + 1`, `e[n - 1]` unused).
/// `z`, when present, is column-major and receives the rotations.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let col_i = &mut lo[i * n..];
                        let col_i1 = &mut hi[..n];
                        for (zi, zi1) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                            let hk = *zi1;
                            *zi1 = s * *zi + c * hk;
                            *zi = c * *zi - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 || iter >= MAX_QL_ITERATIONS {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}
