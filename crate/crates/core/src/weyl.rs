//! Signed permutations, the section representation and the WD₄ subgroup lattice.
//!
//! An element `(σ, ε)` of `WC_n` acts on the `2n` points `(i, s)` by
//! `(i, s) ↦ (σ(i), s ⊕ ε_i)`; point `(i, s)` is numbered `2i + s`. The sign
//! vector is stored as a bitmask, bit `i` being `ε_i`.
//!
//! A section `t` of the double cover over a fiber picks one of the two points
//! over every sheet and is stored as an `n`-bit integer with bit `i` the choice
//! over sheet `i`. The involution `ι` is the bitwise complement.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{self, StabChain};
use crate::perm::{all_perms, compose, Perm};

/// Largest `n` for which the section representation is built.
pub const MAX_SECTION_LETTERS: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    sigma: Perm,
    eps: u64,
}

impl SignedPerm {
    pub fn new(sigma: Perm, eps: u64) -> Result<Self> {
        let n = sigma.degree();
        if n > 63 || (n < 64 && eps >> n != 0) {
            return Err(Error::InvalidPermutation(format!("sign mask {eps:#b} too wide for {n} letters")));
        }
        Ok(SignedPerm { sigma, eps })
    }

    pub fn from_bits(sigma: Perm, bits: &[u8]) -> Result<Self> {
        if bits.len() != sigma.degree() {
            return Err(Error::DegreeMismatch(format!("{} signs for {} letters", bits.len(), sigma.degree())));
        }
        let eps = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | (u64::from(b & 1) << i));
        SignedPerm::new(sigma, eps)
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm { sigma: Perm::identity(n), eps: 0 }
    }

    pub fn unsigned(sigma: Perm) -> Self {
        SignedPerm { sigma, eps: 0 }
    }

    pub fn n(&self) -> usize {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn eps(&self) -> u64 {
        self.eps
    }

    #[inline]
    pub fn eps_at(&self, i: usize) -> u8 {
        ((self.eps >> i) & 1) as u8
    }

    pub fn eps_bits(&self) -> Vec<u8> {
        (0..self.n()).map(|i| self.eps_at(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.eps == 0 && self.sigma.is_identity()
    }

    pub fn inverse(&self) -> Self {
        let mut eps = 0;
        for i in 0..self.n() {
            eps |= u64::from(self.eps_at(i)) << self.sigma.apply(i);
        }
        SignedPerm { sigma: self.sigma.inverse(), eps }
    }

    /// Sum of the signs over one cycle of `σ`; `1` means the double cover is
    /// branched at the corresponding point of the base of the tower.
    pub fn cycle_sign(&self, cycle: &[usize]) -> u8 {
        cycle.iter().fold(0, |acc, &i| acc ^ self.eps_at(i))
    }

    /// `c g c^-1`.
    pub fn conjugate_by(&self, c: &SignedPerm) -> Self {
        sp_compose(&sp_compose(c, self), &c.inverse())
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} signs ", self.sigma)?;
        for b in self.eps_bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPerm[{}]{}", self.n(), self)
    }
}

/// `g2 · g1`: apply `g1`, then `g2`.
pub fn sp_compose(g2: &SignedPerm, g1: &SignedPerm) -> SignedPerm {
    assert_eq!(g2.n(), g1.n(), "size mismatch in sp_compose");
    let mut eps = g1.eps;
    for i in 0..g1.n() {
        eps ^= u64::from(g2.eps_at(g1.sigma.apply(i))) << i;
    }
    SignedPerm { sigma: compose(&g2.sigma, &g1.sigma), eps }
}

/// Left-to-right product in `WC_n`, the last factor acting first.
pub fn sp_product<'a, I>(n: usize, factors: I) -> SignedPerm
where
    I: IntoIterator<Item = &'a SignedPerm>,
{
    factors.into_iter().fold(SignedPerm::identity(n), |acc, x| sp_compose(&acc, x))
}

pub fn sp_commutator(a: &SignedPerm, b: &SignedPerm) -> SignedPerm {
    sp_compose(&sp_compose(a, b), &sp_compose(&a.inverse(), &b.inverse()))
}

/// The action on the `2n` points `2i + s`.
pub fn embed_2n(g: &SignedPerm) -> Perm {
    let n = g.n();
    let mut images = vec![0; 2 * n];
    for i in 0..n {
        let e = g.eps_at(i) as usize;
        let j = g.sigma.apply(i);
        images[2 * i] = 2 * j + e;
        images[2 * i + 1] = 2 * j + (1 - e);
    }
    Perm::from_images(images).expect("signed permutation embeds as a bijection")
}

/// Inverse of [`embed_2n`] on the centralizer of the global flip.
pub fn unembed(p: &Perm) -> Option<SignedPerm> {
    if !p.degree().is_multiple_of(2) {
        return None;
    }
    let n = p.degree() / 2;
    let mut sigma = vec![0; n];
    let mut eps = 0u64;
    for (i, s) in sigma.iter_mut().enumerate() {
        let a = p.apply(2 * i);
        let b = p.apply(2 * i + 1);
        if a / 2 != b / 2 || a == b {
            return None;
        }
        *s = a / 2;
        eps |= ((a % 2) as u64) << i;
    }
    Some(SignedPerm { sigma: Perm::from_images(sigma).ok()?, eps })
}

/// The global flip `(i, s) ↦ (i, 1 - s)` on `2n` points.
pub fn global_flip(n: usize) -> Perm {
    embed_2n(&SignedPerm { sigma: Perm::identity(n), eps: (1u64 << n) - 1 })
}

/// `Σ ε_i mod 2`; zero exactly on `WD_n`.
pub fn orientation_char(g: &SignedPerm) -> u8 {
    (g.eps.count_ones() % 2) as u8
}

fn check_section_size(n: usize) -> Result<()> {
    if n > MAX_SECTION_LETTERS {
        return Err(Error::TooLarge(format!("section representation for {n} > {MAX_SECTION_LETTERS} letters")));
    }
    Ok(())
}

/// Image of one section.
#[inline]
pub fn act_on_section(g: &SignedPerm, t: u64) -> u64 {
    let mut u = 0;
    for i in 0..g.n() {
        let bit = ((t >> i) & 1) ^ u64::from(g.eps_at(i));
        u |= bit << g.sigma.apply(i);
    }
    u
}

/// The action on the `2^n` sections.
pub fn section_action(g: &SignedPerm) -> Result<Perm> {
    check_section_size(g.n())?;
    let images = (0..1u64 << g.n()).map(|t| act_on_section(g, t) as usize).collect();
    Perm::from_images(images)
}

/// Index of the `ι`-orbit `{t, !t}`: the member with top bit clear.
#[inline]
pub fn class_of(n: usize, t: u64) -> u64 {
    if (t >> (n - 1)) & 1 == 1 {
        !t & ((1u64 << n) - 1)
    } else {
        t
    }
}

/// The action on the `2^(n-1)` orbits `{t, !t}` of the flip.
pub fn class_action(g: &SignedPerm) -> Result<Perm> {
    let n = g.n();
    check_section_size(n)?;
    let images = (0..1u64 << (n - 1)).map(|c| class_of(n, act_on_section(g, c)) as usize).collect();
    Perm::from_images(images)
}

/// All `2^n n!` elements of `WC_n`.
pub fn enumerate_wc(n: usize) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    for sigma in all_perms(n) {
        for eps in 0..1u64 << n {
            out.push(SignedPerm { sigma: sigma.clone(), eps });
        }
    }
    out
}

/// The `2^(n-1) n!` elements of `WD_n`.
pub fn enumerate_wd(n: usize) -> Vec<SignedPerm> {
    enumerate_wc(n).into_iter().filter(|g| orientation_char(g) == 0).collect()
}

/// Generators of `WC_n`: adjacent transpositions and one sign flip.
pub fn wc_generators(n: usize) -> Vec<SignedPerm> {
    let mut gens: Vec<SignedPerm> =
        (0..n.saturating_sub(1)).map(|i| SignedPerm::unsigned(Perm::transposition(n, i, i + 1))).collect();
    if n > 0 {
        gens.push(SignedPerm { sigma: Perm::identity(n), eps: 1 });
    }
    gens
}

/// Generators of `WD_n`: adjacent transpositions and one double flip.
pub fn wd_generators(n: usize) -> Vec<SignedPerm> {
    let mut gens: Vec<SignedPerm> =
        (0..n.saturating_sub(1)).map(|i| SignedPerm::unsigned(Perm::transposition(n, i, i + 1))).collect();
    if n > 1 {
        gens.push(SignedPerm { sigma: Perm::identity(n), eps: 0b11 });
    }
    gens
}

// ---------------------------------------------------------------------------
// WD₄ lattice
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub name: String,
    pub generators: Vec<Perm>,
    pub order: u128,
    pub index: u128,
}

/// Point of the 8-point labeling for `x_i^+` (`sign = 0`) or `x_i^-` (`sign = 1`), `i` 0-based.
pub const fn x(i: usize, sign: usize) -> usize {
    2 * i + sign
}

fn setwise_stabilizer(elements: &[Perm], sets: &[Vec<usize>]) -> Vec<Perm> {
    let mut target: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut v = s.clone();
            v.sort_unstable();
            v
        })
        .collect();
    target.sort();
    elements
        .iter()
        .filter(|g| {
            let mut img: Vec<Vec<usize>> = target
                .iter()
                .map(|s| {
                    let mut v: Vec<usize> = s.iter().map(|&p| g.apply(p)).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            img.sort();
            img == target
        })
        .cloned()
        .collect()
}

/// The elements of `WD₄` together with their embeddings on the 8 points.
pub fn wd4_elements() -> Vec<(SignedPerm, Perm)> {
    enumerate_wd(4).into_iter().map(|g| (g.clone(), embed_2n(&g))).collect()
}

fn record(name: &str, elements: Vec<Perm>) -> SubgroupRecord {
    let order = elements.len() as u128;
    SubgroupRecord { name: name.to_string(), generators: group::generators_of(8, &elements), order, index: 192 / order }
}

/// The named subgroups of `WD₄` acting on `{x_i^±}`.
///
/// `H̃₁, H̃₂` (and `H₁, H₂`) are the stabilizers of a section (and of a
/// flip-orbit of sections) in the even- and odd-weight halves of the
/// section representation; this is how the outer automorphisms move `H̃₀`.
/// `G̃₁, G̃₂` are the two intermediate groups `G < G̃ < N(G)` other than `G̃₀`.
pub fn wd4_lattice() -> Vec<SubgroupRecord> {
    let els = wd4_elements();
    let perms: Vec<Perm> = els.iter().map(|(_, p)| p.clone()).collect();
    let section_stab = |sections: &[u64]| -> Vec<Perm> {
        els.iter()
            .filter(|(g, _)| {
                let mut img: Vec<u64> = sections.iter().map(|&t| act_on_section(g, t)).collect();
                img.sort_unstable();
                img == sections
            })
            .map(|(_, p)| p.clone())
            .collect()
    };
    let h0 = setwise_stabilizer(&perms, &[vec![x(0, 0), x(0, 1)]]);
    let ht0 = setwise_stabilizer(&perms, &[vec![x(0, 0)]]);
    let h1 = section_stab(&[0b0000, 0b1111]);
    let ht1 = section_stab(&[0b0000]);
    let h2 = section_stab(&[0b0001, 0b1110]);
    let ht2 = section_stab(&[0b0001]);
    let g = setwise_stabilizer(&perms, &[vec![x(0, 0), x(1, 0)], vec![x(0, 1), x(1, 1)]]);
    let ng = setwise_stabilizer(
        &perms,
        &[vec![x(0, 0), x(0, 1), x(1, 0), x(1, 1)], vec![x(2, 0), x(2, 1), x(3, 0), x(3, 1)]],
    );
    let gt0: Vec<Perm> = ng
        .iter()
        .filter(|p| {
            let mut img: Vec<usize> = [x(0, 0), x(0, 1), x(1, 0), x(1, 1)].iter().map(|&q| p.apply(q)).collect();
            img.sort_unstable();
            img == vec![0, 1, 2, 3]
        })
        .cloned()
        .collect();
    let mut intermediates: Vec<Vec<Perm>> = Vec::new();
    let g_set: HashSet<&Perm> = g.iter().collect();
    for y in &ng {
        if g_set.contains(y) {
            continue;
        }
        let mut sub: Vec<Perm> = g.clone();
        sub.extend(g.iter().map(|h| compose(y, h)));
        sub.sort();
        if !intermediates.contains(&sub) {
            intermediates.push(sub);
        }
    }
    let mut gt0_sorted = gt0.clone();
    gt0_sorted.sort();
    intermediates.retain(|s| *s != gt0_sorted);
    intermediates.sort();
    let mut out = vec![
        record("WD4", perms.clone()),
        record("H0", h0),
        record("H1", h1),
        record("H2", h2),
        record("H~0", ht0),
        record("H~1", ht1),
        record("H~2", ht2),
        record("G", g),
        record("N(G)", ng),
        record("G~0", gt0),
    ];
    for (k, sub) in intermediates.into_iter().enumerate() {
        out.push(record(&format!("G~{}", k + 1), sub));
    }
    out
}

/// All elements of the subgroup of `WD₄` generated by a record's generators.
pub fn record_elements(rec: &SubgroupRecord) -> Vec<Perm> {
    group::enumerate(8, &rec.generators).expect("subgroups of WD4 are small")
}

/// Whether two subgroups of `WD₄` (given by element lists) are conjugate in `WD₄`.
pub fn conjugate_in_wd4(a: &[Perm], b: &[Perm]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let target: HashSet<&Perm> = b.iter().collect();
    wd4_elements().iter().any(|(_, c)| a.iter().all(|h| target.contains(&h.conjugate_by(c))))
}

/// Elements of the normalizer of `sub` in `WD₄`.
pub fn normalizer_in_wd4(sub: &[Perm]) -> Vec<Perm> {
    let set: HashSet<&Perm> = sub.iter().collect();
    wd4_elements()
        .into_iter()
        .map(|(_, p)| p)
        .filter(|c| sub.iter().all(|h| set.contains(&h.conjugate_by(c))))
        .collect()
}

/// Plain-text table of the lattice: name, order, index, generators.
pub fn format_lattice_table(records: &[SubgroupRecord]) -> String {
    let mut s = String::from("name\torder\tindex\tgenerators\n");
    for r in records {
        let gens: Vec<String> = r.generators.iter().map(Perm::to_string).collect();
        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.name, r.order, r.index, gens.join(" ")));
    }
    s
}

/// Membership test against a record.
pub fn record_contains(rec: &SubgroupRecord, p: &Perm) -> bool {
    StabChain::new(8, &rec.generators).map(|c| c.contains(p)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sp(rng: &mut ChaCha8Rng, n: usize) -> SignedPerm {
        let perms = all_perms(n);
        let sigma = perms[rng.gen_range(0..perms.len())].clone();
        SignedPerm::new(sigma, rng.gen_range(0..1u64 << n)).unwrap()
    }

    fn sp(cycles: &str, n: usize, eps: u64) -> SignedPerm {
        SignedPerm::new(Perm::parse(cycles, n).unwrap(), eps).unwrap()
    }

    #[test]
    fn flips_are_involutions() {
        let e1 = sp("()", 3, 0b001);
        assert!(sp_compose(&e1, &e1).is_identity());
        let g = sp("(1 2 3)", 3, 0b101);
        assert_eq!(sp_compose(&g, &SignedPerm::identity(3)), g);
        assert_eq!(sp_compose(&SignedPerm::identity(3), &g), g);
        assert!(sp_compose(&g, &g.inverse()).is_identity());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            for _ in 0..50 {
                let a = random_sp(&mut rng, n);
                let b = random_sp(&mut rng, n);
                assert_eq!(embed_2n(&sp_compose(&a, &b)), compose(&embed_2n(&a), &embed_2n(&b)));
                let flip = global_flip(n);
                assert_eq!(compose(&embed_2n(&a), &flip), compose(&flip, &embed_2n(&a)));
                assert_eq!(unembed(&embed_2n(&a)), Some(a));
            }
        }
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_2n(&sp("(1 2)", 2, 0)), Perm::parse("(1 3)(2 4)", 4).unwrap());
        let all = sp("()", 3, 0b111);
        assert_eq!(embed_2n(&all).cycle_type(), vec![2, 2, 2]);
        assert_eq!(embed_2n(&all).sign(), -1);
    }

    #[test]
    fn orientation_is_embedded_sign() {
        for n in 1..=3 {
            for g in enumerate_wc(n) {
                assert_eq!(orientation_char(&g) == 1, embed_2n(&g).is_odd());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 4..=5 {
            for _ in 0..200 {
                let g = random_sp(&mut rng, n);
                assert_eq!(orientation_char(&g) == 1, embed_2n(&g).is_odd());
            }
        }
    }

    #[test]
    fn section_action_examples() {
        let swap = section_action(&sp("(1 2)", 2, 0)).unwrap();
        assert_eq!(swap.apply(0b00), 0b00);
        assert_eq!(swap.apply(0b11), 0b11);
        assert_eq!(swap.apply(0b01), 0b10);
        let flip = class_action(&sp("()", 2, 0b01)).unwrap();
        assert_eq!(flip, Perm::parse("(1 2)", 2).unwrap());
        assert!(section_action(&SignedPerm::identity(13)).is_err());
    }

    #[test]
    fn section_and_class_actions_are_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            let mask = (1u64 << n) - 1;
            for _ in 0..40 {
                let a = random_sp(&mut rng, n);
                let b = random_sp(&mut rng, n);
                let ab = sp_compose(&a, &b);
                let sa = section_action(&a).unwrap();
                let sb = section_action(&b).unwrap();
                assert_eq!(section_action(&ab).unwrap(), compose(&sa, &sb));
                assert_eq!(class_action(&ab).unwrap(), compose(&class_action(&a).unwrap(), &class_action(&b).unwrap()));
                for t in 0..=mask {
                    assert_eq!(act_on_section(&a, t ^ mask), act_on_section(&a, t) ^ mask);
                    assert_eq!(class_of(n, act_on_section(&a, t)), class_of(n, act_on_section(&a, class_of(n, t))));
                }
                let unsigned = SignedPerm::unsigned(a.sigma().clone());
                for t in 0..=mask {
                    assert_eq!(act_on_section(&unsigned, t).count_ones(), t.count_ones());
                }
            }
        }
    }

    #[test]
    fn wd_preserves_parity_halves() {
        for n in [3usize, 4] {
            for g in enumerate_wd(n) {
                for t in 0..1u64 << n {
                    assert_eq!(act_on_section(&g, t).count_ones() % 2, t.count_ones() % 2);
                }
            }
        }
        // odd n: the flip exchanges the halves; even n: it preserves them
        for n in [3usize, 4] {
            let flip = SignedPerm::new(Perm::identity(n), (1 << n) - 1).unwrap();
            for t in 0..1u64 << n {
                let moved = act_on_section(&flip, t).count_ones() % 2 != t.count_ones() % 2;
                assert_eq!(moved, n % 2 == 1);
            }
        }
    }

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_wc(4).len(), 384);
        assert_eq!(enumerate_wd(4).len(), 192);
        let gens: Vec<Perm> = wd_generators(4).iter().map(embed_2n).collect();
        assert_eq!(group::group_order(8, &gens).unwrap(), 192);
        assert_eq!(group::enumerate(8, &gens).unwrap().len(), 192);
        let gens: Vec<Perm> = wc_generators(4).iter().map(embed_2n).collect();
        assert_eq!(group::group_order(8, &gens).unwrap(), 384);
    }

    #[test]
    fn lattice_orders() {
        let lat = wd4_lattice();
        let order = |name: &str| lat.iter().find(|r| r.name == name).unwrap().order;
        assert_eq!(order("WD4"), 192);
        for i in 0..3 {
            assert_eq!(order(&format!("H{i}")), 48);
            assert_eq!(order(&format!("H~{i}")), 24);
            assert_eq!(order(&format!("G~{i}")), 32);
        }
        assert_eq!(order("G"), 16);
        assert_eq!(order("N(G)"), 64);
        for r in &lat {
            assert_eq!(group::group_order(8, &r.generators).unwrap(), r.order);
        }
        assert_eq!(lat.iter().find(|r| r.name == "G").unwrap().index, 12);
        assert_eq!(lat.iter().find(|r| r.name == "N(G)").unwrap().index, 3);
    }

    #[test]
    fn normalizer_quotient_is_klein() {
        let lat = wd4_lattice();
        let get = |name: &str| record_elements(lat.iter().find(|r| r.name == name).unwrap());
        let g = get("G");
        let ng = get("N(G)");
        let mut norm = normalizer_in_wd4(&g);
        norm.sort();
        let mut ng_sorted = ng.clone();
        ng_sorted.sort();
        assert_eq!(norm, ng_sorted);
        let g_set: HashSet<&Perm> = g.iter().collect();
        assert!(ng.iter().all(|y| g_set.contains(&compose(y, y))));
        assert_eq!(ng.len() / g.len(), 4);
        for i in 0..3 {
            let gt = get(&format!("G~{i}"));
            assert!(g.iter().all(|h| gt.contains(h)));
            assert!(gt.iter().all(|h| ng.contains(h)));
        }
    }

    #[test]
    fn stabilizers_are_pairwise_non_conjugate() {
        let lat = wd4_lattice();
        let get = |name: &str| record_elements(lat.iter().find(|r| r.name == name).unwrap());
        for family in ["H~", "H"] {
            let subs: Vec<Vec<Perm>> = (0..3).map(|i| get(&format!("{family}{i}"))).collect();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(conjugate_in_wd4(&subs[i], &subs[j]), i == j, "{family}{i} vs {family}{j}");
                }
            }
        }
    }

    #[test]
    fn lattice_table_lists_every_record() {
        let lat = wd4_lattice();
        let table = format_lattice_table(&lat);
        assert_eq!(table.lines().count(), lat.len() + 1);
        assert!(table.contains("N(G)\t64\t3\t"));
        assert!(record_contains(&lat[0], &embed_2n(&sp("(1 2)", 4, 0b11))));
    }
}
