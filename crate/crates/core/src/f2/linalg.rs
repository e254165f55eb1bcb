//! Linear systems over F₂ with bit-packed rows of arbitrary width.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64).max(1)] }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| 64 * k + w.trailing_zeros() as usize)
    }
}

/// Solution set `x0 + span(kernel)` of a linear system.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: BitRow,
    pub kernel: Vec<BitRow>,
}

/// Solves `A x = b` where `rows[k]` is row `k` of `A` over `nvars` unknowns.
pub fn solve(rows: &[BitRow], rhs: &[bool], nvars: usize) -> Option<AffineSolution> {
    let mut m: Vec<(BitRow, bool)> = rows.iter().cloned().zip(rhs.iter().copied()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(k) = (r..m.len()).find(|&k| m[k].0.get(col)) else { continue };
        m.swap(r, k);
        let (prow, pb) = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row.0.get(col) {
                row.0.xor_with(&prow);
                row.1 ^= pb;
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if m[r..].iter().any(|(row, b)| row.is_zero() && *b) {
        return None;
    }
    let mut particular = BitRow::zeros(nvars);
    let mut is_pivot = vec![false; nvars];
    for &(row, col) in &pivots {
        particular.set(col, m[row].1);
        is_pivot[col] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..nvars).filter(|&c| !is_pivot[c]) {
        let mut v = BitRow::zeros(nvars);
        v.set(free, true);
        for &(row, col) in &pivots {
            if m[row].0.get(free) {
                v.set(col, true);
            }
        }
        kernel.push(v);
    }
    Some(AffineSolution { particular, kernel })
}

/// Rank of a set of rows.
pub fn rank(rows: &[BitRow]) -> usize {
    let mut basis: Vec<BitRow> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        for b in &basis {
            if let Some(p) = b.first_one() {
                if v.get(p) {
                    v.xor_with(b);
                }
            }
        }
        if !v.is_zero() {
            // keep basis reduced so pivots stay distinct
            let p = v.first_one().expect("nonzero");
            for b in basis.iter_mut() {
                if b.get(p) {
                    b.xor_with(&v);
                }
            }
            basis.push(v);
        }
    }
    basis.len()
}

/// Rank of vectors packed in `u64` words.
pub fn rank_u64(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v0 in vectors {
        let mut v = v0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Coordinates of `x` in the independent family `basis`, as a bitmask over its indices.
pub fn express_u64(basis: &[u64], x: u64) -> Option<u64> {
    // echelon form keyed by highest bit, tracking combinations
    let mut ech: Vec<(u64, u64)> = Vec::new();
    for (k, &b) in basis.iter().enumerate() {
        let mut v = (b, 1u64 << k);
        for &(e, c) in &ech {
            if v.0 ^ e < v.0 {
                v = (v.0 ^ e, v.1 ^ c);
            }
        }
        if v.0 != 0 {
            ech.push(v);
            ech.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
        }
    }
    let mut v = (x, 0u64);
    for &(e, c) in &ech {
        if v.0 ^ e < v.0 {
            v = (v.0 ^ e, v.1 ^ c);
        }
    }
    (v.0 == 0).then_some(v.1)
}
