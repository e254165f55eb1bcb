//! Isotropic subspaces of a symplectic F₂-space.

use super::SymplecticF2;
use crate::error::{Error, Result};

/// Largest ambient dimension accepted by [`enumerate_isotropic`].
pub const MAX_ISOTROPIC_DIM: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicSubspace {
    /// Reduced echelon basis: each vector's lowest set bit is its pivot,
    /// and no pivot appears in another basis vector.
    pub basis: Vec<u64>,
}

impl IsotropicSubspace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// All `2^rank` elements.
    pub fn elements(&self) -> Vec<u64> {
        (0..1u64 << self.basis.len())
            .map(|c| self.basis.iter().enumerate().filter(|(k, _)| (c >> k) & 1 == 1).fold(0, |acc, (_, &v)| acc ^ v))
            .collect()
    }
}

/// Every isotropic subspace of rank `r`, each listed once.
pub fn enumerate_isotropic(space: &SymplecticF2, r: usize) -> Result<Vec<IsotropicSubspace>> {
    let dim = space.dim();
    if dim > MAX_ISOTROPIC_DIM {
        return Err(Error::TooLarge(format!("isotropic enumeration in dimension {dim} > {MAX_ISOTROPIC_DIM}")));
    }
    let mut out = Vec::new();
    if r > space.genus() {
        return Ok(out);
    }
    let mut pivots = Vec::with_capacity(r);
    choose_pivots(space, r, 0, &mut pivots, &mut out);
    Ok(out)
}

fn choose_pivots(
    space: &SymplecticF2,
    r: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<IsotropicSubspace>,
) {
    if pivots.len() == r {
        let pivot_mask = pivots.iter().fold(0u64, |m, &p| m | (1 << p));
        let mut basis = Vec::with_capacity(r);
        fill_vectors(space, pivots, pivot_mask, &mut basis, out);
        return;
    }
    for p in start..space.dim() {
        pivots.push(p);
        choose_pivots(space, r, p + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_vectors(
    space: &SymplecticF2,
    pivots: &[usize],
    pivot_mask: u64,
    basis: &mut Vec<u64>,
    out: &mut Vec<IsotropicSubspace>,
) {
    let k = basis.len();
    if k == pivots.len() {
        out.push(IsotropicSubspace { basis: basis.clone() });
        return;
    }
    let p = pivots[k];
    let free: Vec<usize> = (p + 1..space.dim()).filter(|&i| (pivot_mask >> i) & 1 == 0).collect();
    for bits in 0..1u64 << free.len() {
        let mut v = 1u64 << p;
        for (j, &i) in free.iter().enumerate() {
            if (bits >> j) & 1 == 1 {
                v |= 1 << i;
            }
        }
        if basis.iter().all(|&w| space.pair(v, w) == 0) {
            basis.push(v);
            fill_vectors(space, pivots, pivot_mask, basis, out);
            basis.pop();
        }
    }
}

/// Number of isotropic subspaces of rank `r` in dimension `2g`:
/// `Π_{i<r} (2^{2g-2i} - 1) / (2^{i+1} - 1)`.
pub fn isotropic_count(g: usize, r: usize) -> u64 {
    if r > g {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num *= (1u128 << (2 * g - 2 * i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}
