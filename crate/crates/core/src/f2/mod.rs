//! Symplectic F₂-spaces and the quadratic forms polarizing them.
//!
//! Vectors are bitmasks over a fixed basis `e_0 .. e_{2g-1}`. A theta
//! characteristic is modeled as a quadratic form `q` with
//! `q(x + y) = q(x) + q(y) + ⟨x, y⟩`; its parity is the Arf invariant.

pub mod fano;
pub mod isotropic;
pub mod linalg;

use crate::error::{Error, Result};

/// Largest dimension handled by exhaustive enumeration of vectors.
pub const MAX_ENUM_DIM: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticF2 {
    dim: usize,
    /// Row `i` has bit `j` equal to `⟨e_i, e_j⟩`.
    gram: Vec<u64>,
}

#[inline]
fn parity(x: u64) -> u8 {
    (x.count_ones() & 1) as u8
}

impl SymplecticF2 {
    pub fn new(gram: Vec<u64>) -> Result<Self> {
        let dim = gram.len();
        if !dim.is_multiple_of(2) || dim > 62 {
            return Err(Error::Precondition(format!("symplectic dimension {dim} must be even and at most 62")));
        }
        for i in 0..dim {
            if gram[i] >> dim != 0 || (gram[i] >> i) & 1 == 1 {
                return Err(Error::Precondition(format!("gram row {i} is not alternating")));
            }
            for j in 0..dim {
                if (gram[i] >> j) & 1 != (gram[j] >> i) & 1 {
                    return Err(Error::Precondition("gram matrix is not symmetric".into()));
                }
            }
        }
        if linalg::rank_u64(&gram) != dim {
            return Err(Error::Precondition("gram matrix is degenerate".into()));
        }
        Ok(SymplecticF2 { dim, gram })
    }

    /// The standard space of dimension `2g` with hyperbolic pairs `(e_{2i}, e_{2i+1})`.
    pub fn standard(g: usize) -> Self {
        let gram = (0..2 * g).map(|i| 1u64 << (i ^ 1)).collect();
        SymplecticF2 { dim: 2 * g, gram }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn genus(&self) -> usize {
        self.dim / 2
    }

    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    pub fn size(&self) -> u64 {
        1u64 << self.dim
    }

    fn mask(&self) -> u64 {
        if self.dim == 64 {
            u64::MAX
        } else {
            (1u64 << self.dim) - 1
        }
    }

    /// `gram · x`: bit `i` is `⟨e_i, x⟩`.
    #[inline]
    pub fn dual(&self, x: u64) -> u64 {
        let mut r = 0;
        let mut y = x;
        while y != 0 {
            let i = y.trailing_zeros() as usize;
            r ^= self.gram[i];
            y &= y - 1;
        }
        r
    }

    #[inline]
    pub fn pair(&self, x: u64, y: u64) -> u8 {
        parity(self.dual(x) & y)
    }

    pub fn check_vector(&self, x: u64) -> Result<()> {
        if x & !self.mask() != 0 {
            return Err(Error::DegreeMismatch(format!("vector {x:#b} outside dimension {}", self.dim)));
        }
        Ok(())
    }

    /// `{x : ⟨x, v⟩ = 0 for all v in vs}` as an explicit list (small dimensions only).
    pub fn perp_elements(&self, vs: &[u64]) -> Vec<u64> {
        (0..self.size()).filter(|&x| vs.iter().all(|&v| self.pair(x, v) == 0)).collect()
    }

    /// A symplectic basis `(a_i, b_i)` with `⟨a_i, b_j⟩ = δ_ij` and all other pairings zero.
    pub fn symplectic_basis(&self) -> Vec<(u64, u64)> {
        let mut rest: Vec<u64> = (0..self.dim).map(|i| 1u64 << i).collect();
        let mut out = Vec::new();
        while !rest.is_empty() {
            let a = rest[0];
            let k = (1..rest.len()).find(|&k| self.pair(a, rest[k]) == 1).expect("nondegenerate pairing");
            let b = rest[k];
            out.push((a, b));
            rest = rest
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != 0 && j != k)
                .map(|(_, &w)| {
                    let mut w2 = w;
                    if self.pair(w, b) == 1 {
                        w2 ^= a;
                    }
                    if self.pair(w, a) == 1 {
                        w2 ^= b;
                    }
                    w2
                })
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormF2 {
    space: SymplecticF2,
    /// Bit `i` is `q(e_i)`.
    values: u64,
}

impl QuadraticFormF2 {
    pub fn new(space: SymplecticF2, values: u64) -> Result<Self> {
        space.check_vector(values)?;
        Ok(QuadraticFormF2 { space, values })
    }

    pub fn space(&self) -> &SymplecticF2 {
        &self.space
    }

    pub fn values(&self) -> u64 {
        self.values
    }

    /// `q(x) = Σ x_i q(e_i) + Σ_{i<j} x_i x_j ⟨e_i, e_j⟩`.
    pub fn eval(&self, x: u64) -> u8 {
        let mut acc = parity(x & self.values);
        let mut y = x;
        while y != 0 {
            let i = y.trailing_zeros() as usize;
            y &= y - 1;
            acc ^= parity(self.space.gram[i] & y);
        }
        acc
    }

    pub fn zero_count(&self) -> u64 {
        (0..self.space.size()).filter(|&x| self.eval(x) == 0).count() as u64
    }

    /// Arf invariant: enumeration for small spaces, symplectic reduction otherwise.
    pub fn arf(&self) -> u8 {
        if self.space.dim <= 12 {
            self.arf_by_count()
        } else {
            self.arf_by_basis()
        }
    }

    pub fn arf_by_count(&self) -> u8 {
        let g = self.space.genus() as u32;
        let even_zeros = (1u64 << (2 * g)) / 2 + (1u64 << g) / 2;
        u8::from(self.zero_count() != even_zeros)
    }

    pub fn arf_by_basis(&self) -> u8 {
        self.space.symplectic_basis().iter().fold(0, |acc, &(a, b)| acc ^ (self.eval(a) & self.eval(b)))
    }

    pub fn is_even(&self) -> bool {
        self.arf() == 0
    }
}

/// All `2^(2g)` forms polarizing the pairing of `space`.
pub fn all_forms(space: &SymplecticF2) -> Vec<QuadraticFormF2> {
    (0..space.size()).map(|v| QuadraticFormF2 { space: space.clone(), values: v }).collect()
}

pub fn q_eval(q: &QuadraticFormF2, x: u64) -> u8 {
    q.eval(x)
}

pub fn arf(q: &QuadraticFormF2) -> u8 {
    q.arf()
}

pub fn pair(space: &SymplecticF2, x: u64, y: u64) -> u8 {
    space.pair(x, y)
}

/// `x ↦ q(x) + ⟨x, v⟩`.
pub fn translate_form(q: &QuadraticFormF2, v: u64) -> QuadraticFormF2 {
    QuadraticFormF2 { space: q.space.clone(), values: q.values ^ q.space.dual(v) }
}

/// Numbers of even and odd forms on the standard space of genus `g`, by enumeration.
pub fn parity_counts(g: usize) -> (u64, u64) {
    let space = SymplecticF2::standard(g);
    let even = all_forms(&space).iter().filter(|q| q.is_even()).count() as u64;
    (even, space.size() - even)
}

/// The quotient `μ^⊥ / (μ)` with its induced pairing.
#[derive(Clone, Debug)]
pub struct Descent {
    pub source: SymplecticF2,
    pub mu: u64,
    pub quotient: SymplecticF2,
    /// Lifts in the source of the quotient's basis vectors.
    pub lifts: Vec<u64>,
    basis: Vec<u64>,
}

impl Descent {
    /// Image of `x` in the quotient, or `None` when `x ∉ μ^⊥`.
    pub fn project(&self, x: u64) -> Option<u64> {
        if self.source.pair(x, self.mu) != 0 {
            return None;
        }
        let coords = linalg::express_u64(&self.basis, x)?;
        Some(coords >> 1)
    }

    /// A lift of a quotient vector.
    pub fn lift(&self, y: u64) -> u64 {
        let mut x = 0;
        for (k, &l) in self.lifts.iter().enumerate() {
            if (y >> k) & 1 == 1 {
                x ^= l;
            }
        }
        x
    }
}

pub fn descend_space(space: &SymplecticF2, mu: u64) -> Result<Descent> {
    space.check_vector(mu)?;
    if mu == 0 {
        return Err(Error::Precondition("cannot descend along μ = 0".into()));
    }
    let r = space.dual(mu);
    let p = r.trailing_zeros() as usize;
    let mut perp: Vec<u64> = Vec::new();
    for i in (0..space.dim).filter(|&i| i != p) {
        perp.push(if (r >> i) & 1 == 1 { (1u64 << i) | (1u64 << p) } else { 1u64 << i });
    }
    let coords = linalg::express_u64(&perp, mu).expect("μ is isotropic, so μ ∈ μ^⊥");
    let drop = coords.trailing_zeros() as usize;
    let lifts: Vec<u64> = perp.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v).collect();
    let gram: Vec<u64> = lifts
        .iter()
        .map(|&a| lifts.iter().enumerate().fold(0u64, |row, (j, &b)| row | (u64::from(space.pair(a, b)) << j)))
        .collect();
    let quotient = SymplecticF2::new(gram)?;
    let mut basis = vec![mu];
    basis.extend(&lifts);
    Ok(Descent { source: space.clone(), mu, quotient, lifts, basis })
}

/// The form induced on `μ^⊥ / (μ)`; requires `q(μ) = 0`.
pub fn descend_form(q: &QuadraticFormF2, descent: &Descent) -> Result<QuadraticFormF2> {
    if q.eval(descent.mu) != 0 {
        return Err(Error::Precondition("q(μ) = 1: form does not descend".into()));
    }
    let values = descent.lifts.iter().enumerate().fold(0u64, |acc, (k, &l)| acc | (u64::from(q.eval(l)) << k));
    QuadraticFormF2::new(descent.quotient.clone(), values)
}

/// One row of the Arf-under-descent table: how many descendable pairs `(q, μ)`
/// keep or change their Arf invariant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DescentArfTable {
    pub genus: usize,
    pub preserved: u64,
    pub changed: u64,
}

pub fn descent_arf_table(g: usize) -> DescentArfTable {
    let space = SymplecticF2::standard(g);
    let mut table = DescentArfTable { genus: g, ..Default::default() };
    for mu in 1..space.size() {
        let d = descend_space(&space, mu).expect("nonzero μ");
        for q in all_forms(&space) {
            if q.eval(mu) != 0 {
                continue;
            }
            let qd = descend_form(&q, &d).expect("descendable");
            if qd.arf() == q.arf() {
                table.preserved += 1;
            } else {
                table.changed += 1;
            }
        }
    }
    table
}
