use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::QuantumState;

/// Orthonormal monomials `e_nu = z^nu e^{-|z|^2/2} / sqrt(pi^n nu!)` with
/// `|nu| <= cutoff`, in graded-lex order (total degree, then lexicographically
/// descending). Index 0 is `nu = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n: usize,
    cutoff: usize,
    indices: Vec<Vec<u32>>,
    lookup: BTreeMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(n: usize, cutoff: usize) -> Self {
        assert!(n >= 1, "FockBasis needs at least one complex dimension");
        let mut indices = Vec::new();
        for degree in 0..=cutoff {
            let mut current = vec![0u32; n];
            compositions(degree as u32, 0, &mut current, &mut indices);
        }
        let lookup = indices.iter().enumerate().map(|(i, nu)| (nu.clone(), i)).collect();
        Self {
            n,
            cutoff,
            indices,
            lookup,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn multi_index(&self, i: usize) -> &[u32] {
        &self.indices[i]
    }

    pub fn index_of(&self, nu: &[u32]) -> Option<usize> {
        self.lookup.get(nu).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.indices[i].iter().map(|&k| k as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.indices.iter().map(|v| v.as_slice())
    }

    /// Indices with total degree at most `max_degree`.
    pub fn indices_up_to_degree(&self, max_degree: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) <= max_degree).collect()
    }

    /// Squared weight of `state` on the two highest degrees of the truncation.
    pub fn tail_mass(&self, state: &QuantumState) -> f64 {
        let floor = self.cutoff.saturating_sub(1);
        state
            .coeffs()
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.degree(i) >= floor)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }
}

fn compositions(remaining: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let n = current.len();
    if slot == n - 1 {
        current[slot] = remaining;
        out.push(current.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        current[slot] = k;
        compositions(remaining - k, slot + 1, current, out);
    }
    current[slot] = 0;
}
