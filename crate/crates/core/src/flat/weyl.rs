//! Weyl quantization of quadratic forms on the Hermite basis and its
//! comparison with the Toeplitz quantization on the Fock basis.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_traits::Float;

use super::{toeplitz_flat, FlatSymbol, FockBasis, QuadraticForm};
use crate::numerics::{gauss_legendre, HermitianMatrix};
use crate::{Error, Result, C64};

/// Interior deviation accepted by [`weyl_compare`].
pub const WEYL_TOL: f64 = 1e-8;

/// Sparse vector over a basis, as (index, coefficient) pairs.
type Sparse = Vec<(usize, C64)>;

/// Matrix of the `hbar = 1` Weyl quantization of `q(x, p) = w^T M w`,
/// `w = (x_1..x_n, p_1..p_n)`, on Hermite products with total index at most
/// `cutoff`. Built from truncated ladder operators, so only the block with
/// total index `<= cutoff - 2` is exact.
pub fn weyl_quadratic(form: &QuadraticForm, cutoff: usize) -> HermitianMatrix {
    let n = form.n();
    let basis = FockBasis::new(n, cutoff);
    let dim = basis.len();
    let mut out = HermitianMatrix::zeros(dim);
    for col in 0..dim {
        let start: Sparse = vec![(col, C64::new(1.0, 0.0))];
        for l in 0..2 * n {
            let first = apply_coordinate(&basis, &start, l);
            for k in 0..2 * n {
                let m = form.get(k, l);
                if m == 0.0 {
                    continue;
                }
                for (row, c) in apply_coordinate(&basis, &first, k) {
                    out[(row, col)] += c * m;
                }
            }
        }
    }
    out.hermitize();
    out
}

/// `x_j = (b_j + b_j^+)/sqrt 2` for `k = j < n`, `p_j = i (b_j^+ - b_j)/sqrt 2`
/// for `k = n + j`.
fn apply_coordinate(basis: &FockBasis, v: &Sparse, k: usize) -> Sparse {
    let n = basis.n();
    let (j, momentum) = if k < n { (k, false) } else { (k - n, true) };
    let mut out: Sparse = Vec::new();
    let mut nu = vec![0u32; n];
    for &(idx, c) in v {
        nu.copy_from_slice(basis.multi_index(idx));
        let occ = nu[j];
        // raising
        nu[j] = occ + 1;
        if let Some(r) = basis.index_of(&nu) {
            let amp = ((occ + 1) as f64).sqrt() * FRAC_1_SQRT_2;
            let f = if momentum {
                C64::new(0.0, amp)
            } else {
                C64::new(amp, 0.0)
            };
            push(&mut out, r, c * f);
        }
        // lowering
        if occ > 0 {
            nu[j] = occ - 1;
            if let Some(r) = basis.index_of(&nu) {
                let amp = (occ as f64).sqrt() * FRAC_1_SQRT_2;
                let f = if momentum {
                    C64::new(0.0, -amp)
                } else {
                    C64::new(amp, 0.0)
                };
                push(&mut out, r, c * f);
            }
        }
        nu[j] = occ;
    }
    out
}

fn push(v: &mut Sparse, idx: usize, c: C64) {
    match v.iter_mut().find(|(i, _)| *i == idx) {
        Some((_, acc)) => *acc += c,
        None => v.push((idx, c)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylComparison {
    /// Coordinate scaling `s` calibrated on the harmonic symbol.
    pub scaling: f64,
    /// Fitted identity shift `c` on the interior block.
    pub shift: f64,
    /// `tr(M)/4`, the shift expected under this crate's normalization.
    pub predicted_shift: f64,
    pub max_deviation: f64,
    /// Interior entry (row, col) where the deviation peaks.
    pub worst_entry: (usize, usize),
    pub interior_dim: usize,
}

impl WeylComparison {
    pub fn passed(&self) -> bool {
        self.max_deviation <= WEYL_TOL
    }
}

/// Compares `T_1(q)` on the Fock basis with `Op_W(q o Sigma_s) + c I` on the
/// Hermite basis under `e_m <-> psi_m`, on the interior block.
///
/// `Sigma_s(x, p) = (s x, -s p)`: under the Bargmann transform, `y` maps to
/// minus the momentum. The scaling `s` is calibrated from `|z|^2` against
/// `x^2 + p^2`; `c` is the mean diagonal offset.
pub fn weyl_compare(form: &QuadraticForm, cutoff: usize) -> Result<WeylComparison> {
    if cutoff < 2 {
        return Err(Error::OutOfRange(alloc::format!(
            "cutoff must be at least 2, got {cutoff}"
        )));
    }
    let n = form.n();
    let basis = FockBasis::new(n, cutoff);
    let interior = basis.indices_up_to_degree(cutoff - 2);

    // Calibration on the harmonic oscillator: slope of the diagonal from the
    // vacuum to the first excitation of coordinate 0.
    let harmonic_t = toeplitz_flat(&FlatSymbol::harmonic(n), &basis)?;
    let mut ident = vec![0.0; 4 * n * n];
    for i in 0..2 * n {
        ident[i * 2 * n + i] = 1.0;
    }
    let harmonic_w = weyl_quadratic(&QuadraticForm::new(n, ident)?, cutoff);
    let mut first = vec![0u32; n];
    first[0] = 1;
    let e1 = basis.index_of(&first).expect("cutoff >= 2 contains first excitations");
    let slope_t = harmonic_t[(e1, e1)].re - harmonic_t[(0, 0)].re;
    let slope_w = harmonic_w[(e1, e1)].re - harmonic_w[(0, 0)].re;
    let scaling = (slope_t / slope_w).sqrt();

    let dim = 2 * n;
    let mut sigma = vec![0.0; dim * dim];
    for i in 0..n {
        sigma[i * dim + i] = scaling;
        sigma[(n + i) * dim + (n + i)] = -scaling;
    }
    let scaled = form.congruence(&sigma)?;

    let t = toeplitz_flat(&form.to_symbol(), &basis)?;
    let w = weyl_quadratic(&scaled, cutoff);

    let shift = interior.iter().map(|&i| (t[(i, i)] - w[(i, i)]).re).sum::<f64>() / interior.len() as f64;

    let mut max_deviation = 0.0;
    let mut worst_entry = (0, 0);
    for &i in &interior {
        for &j in &interior {
            let mut d = t[(i, j)] - w[(i, j)];
            if i == j {
                d -= shift;
            }
            if d.norm() > max_deviation {
                max_deviation = d.norm();
                worst_entry = (i, j);
            }
        }
    }

    Ok(WeylComparison {
        scaling,
        shift,
        predicted_shift: 0.25 * form.trace(),
        max_deviation,
        worst_entry,
        interior_dim: interior.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargmannCheck {
    /// `max_m | |<e_m, B psi_m>| - 1 |`.
    pub max_diagonal_deviation: f64,
    /// `max_{k != m} |<e_k, B psi_m>|`.
    pub max_off_diagonal: f64,
    /// Change of the overlaps between the coarse and fine grids.
    pub grid_change: f64,
}

/// Applies the Bargmann transform
/// `B f(z) = c e^{-|z|^2/2} int exp(-(z^2/2 + x^2/2 - sqrt(2) z x)) f(x) dx`
/// (`c = pi^{-3/4}` makes it unitary onto the unit-normalized basis) to the
/// Hermite functions `psi_0..psi_{m_max}` by quadrature, and measures the
/// overlaps with `e_0..e_{m_max}` by a second quadrature over `C`.
pub fn bargmann_transform_check(m_max: usize) -> Result<BargmannCheck> {
    let fine = bargmann_overlaps(m_max, 0.05, 80)?;
    let coarse = bargmann_overlaps(m_max, 0.1, 60)?;
    let grid_change = fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if grid_change > 1e-6 {
        return Err(Error::Quadrature(alloc::format!(
            "overlaps moved by {grid_change:e} between x-steps 0.1 and 0.05"
        )));
    }
    let size = m_max + 1;
    let mut max_diagonal_deviation: f64 = 0.0;
    let mut max_off_diagonal: f64 = 0.0;
    for k in 0..size {
        for m in 0..size {
            let v = fine[k * size + m].norm();
            if k == m {
                max_diagonal_deviation = max_diagonal_deviation.max((v - 1.0).abs());
            } else {
                max_off_diagonal = max_off_diagonal.max(v);
            }
        }
    }
    Ok(BargmannCheck {
        max_diagonal_deviation,
        max_off_diagonal,
        grid_change,
    })
}

/// Row-major `<e_k, B psi_m>`.
fn bargmann_overlaps(m_max: usize, dx: f64, radial_nodes: usize) -> Result<Vec<C64>> {
    let size = m_max + 1;
    let half_width = 16.0;
    let steps = (2.0 * half_width / dx).round() as usize;
    let xs: Vec<f64> = (0..=steps).map(|i| -half_width + i as f64 * dx).collect();
    let hermite: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_functions(m_max, x)).collect();

    let prefactor = PI.powf(-0.75);
    let radius = 10.0;
    let rule = gauss_legendre(radial_nodes).on_interval(0.0, radius);
    let angular = 64;
    let dtheta = 2.0 * PI / angular as f64;

    let mut overlaps = vec![C64::new(0.0, 0.0); size * size];
    let mut transformed = vec![C64::new(0.0, 0.0); size];
    for (&r, &wr) in rule.nodes.iter().zip(&rule.weights) {
        for t in 0..angular {
            let z = C64::from_polar(r, t as f64 * dtheta);
            transformed.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for (x, psi) in xs.iter().zip(&hermite) {
                let kernel = (-(z * z * 0.5 + 0.5 * x * x - z * (2f64.sqrt() * x))).exp() * dx;
                for (acc, p) in transformed.iter_mut().zip(psi) {
                    *acc += kernel * *p;
                }
            }
            let gauss = (-0.5 * r * r).exp();
            let weight = wr * r * dtheta;
            for k in 0..size {
                let ek = super::basis_function(&[k as u32], &[z]);
                for m in 0..size {
                    let bpsi = transformed[m] * (prefactor * gauss);
                    overlaps[k * size + m] += ek.conj() * bpsi * weight;
                }
            }
        }
    }
    if overlaps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Quadrature("non-finite overlap".into()));
    }
    Ok(overlaps)
}

/// Normalized Hermite functions `psi_0..psi_m` at `x`.
pub fn hermite_functions(m: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m + 1);
    let p0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(p0);
    if m == 0 {
        return out;
    }
    out.push(2f64.sqrt() * x * p0);
    for k in 1..m {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}
