//! Permutations on `{0, .., n-1}`.
//!
//! Points are 0-based everywhere in the library. Cycle notation (both
//! [`std::fmt::Display`] and [`Perm::parse`]) is 1-based and omits fixed
//! points, with `()` for the identity.
//!
//! Composition follows the functional convention: `compose(a, b)` applies
//! `b` first, so `compose(a, b)[i] == a[b[i]]`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x >= n || used[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycles {cycles:?} are not disjoint cycles on {n} points"
                    )));
                }
                used[x] = true;
                images[x] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Perm { images })
    }

    /// The transposition of `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    /// `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &Perm) -> Self {
        let mut images = vec![0; self.degree()];
        for i in 0..self.degree() {
            images[c.apply(i)] = c.apply(self.apply(i));
        }
        Perm { images }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut result = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            result = compose(&base, &result);
        }
        result
    }

    /// Cycles including fixed points, each starting at its smallest point,
    /// ordered by that smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Index of the cycle containing each point, in the order of [`Perm::cycles`].
    pub fn cycle_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.degree()];
        for (k, cyc) in self.cycles().iter().enumerate() {
            for &x in cyc {
                idx[x] = k;
            }
        }
        idx
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i8 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn is_odd(&self) -> bool {
        let moved: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        moved % 2 == 1
    }

    /// Sum over cycles of `len - 1`; the ramification contributed at a branch point.
    pub fn ramification(&self) -> usize {
        self.degree() - self.cycles().len()
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().map(|c| c.len() as u64).fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`, `(1,2)` or `()`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let err = |why: &str| Error::Parse(format!("bad permutation {text:?}: {why}"));
        let s = text.trim();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if !rest_trim.starts_with('(') {
                return Err(err("expected '('"));
            }
            let close = rest_trim.find(')').ok_or_else(|| err("unclosed cycle"))?;
            let body = &rest_trim[1..close];
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                let v: usize = tok.parse().map_err(|_| err("non-numeric point"))?;
                if v == 0 || v > n {
                    return Err(err(&format!("point {v} outside 1..={n}")));
                }
                cyc.push(v - 1);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = rest_trim[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles).map_err(|_| err("points repeat"))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cyc in self.cycles() {
            if cyc.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, x) in cyc.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

/// All `n!` permutations of degree `n` in lexicographic order of image vectors.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Perm { images: cur.clone() }];
    while let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm { images: cur.clone() });
    }
    out
}

/// `a ∘ b`: apply `b`, then `a`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    assert_eq!(a.degree(), b.degree(), "degree mismatch in compose");
    Perm { images: b.images.iter().map(|&x| a.images[x]).collect() }
}

/// Left-to-right product `x1 x2 ... xk`, i.e. `xk` acts first.
pub fn product<'a, I>(n: usize, factors: I) -> Perm
where
    I: IntoIterator<Item = &'a Perm>,
{
    factors.into_iter().fold(Perm::identity(n), |acc, x| compose(&acc, x))
}

/// `[a, b] = a b a^-1 b^-1`.
pub fn commutator(a: &Perm, b: &Perm) -> Perm {
    compose(&compose(a, b), &compose(&a.inverse(), &b.inverse()))
}

/// Orbits of the group generated by `gens`, each sorted, ordered by smallest point.
pub fn orbits(n: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for i in 0..n {
            uf.union(i, g.apply(i));
        }
    }
    uf.classes()
}

pub fn is_transitive(n: usize, gens: &[Perm]) -> bool {
    orbits(n, gens).len() <= 1
}

/// All non-trivial block systems of the group generated by `gens`.
///
/// For an intransitive group the block systems of each orbit are returned
/// separately, each as a partition of that orbit only.
pub fn block_systems(n: usize, gens: &[Perm]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for orbit in orbits(n, gens) {
        if orbit.len() < 4 {
            continue;
        }
        out.extend(orbit_block_systems(n, gens, &orbit));
    }
    out
}

fn orbit_block_systems(n: usize, gens: &[Perm], orbit: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let o0 = orbit[0];
    let mut found: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    let push = |partition: Vec<Vec<usize>>, found: &mut Vec<Vec<Vec<usize>>>, frontier: &mut Vec<Vec<usize>>| {
        if partition.len() <= 1 || partition.len() == orbit.len() || found.contains(&partition) {
            return;
        }
        let block = partition.iter().find(|b| b.contains(&o0)).cloned().unwrap_or_default();
        frontier.push(block);
        found.push(partition);
    };
    for &b in &orbit[1..] {
        let p = minimal_block_partition(n, gens, orbit, &[o0, b]);
        push(p, &mut found, &mut frontier);
    }
    while let Some(block) = frontier.pop() {
        for &c in orbit {
            if block.contains(&c) {
                continue;
            }
            let mut seed = block.clone();
            seed.push(c);
            let p = minimal_block_partition(n, gens, orbit, &seed);
            push(p, &mut found, &mut frontier);
        }
    }
    found.sort_by(|a, b| a[0].len().cmp(&b[0].len()).then_with(|| a.cmp(b)));
    found
}

/// The finest invariant partition of `orbit` in which all points of `seed` share a block.
fn minimal_block_partition(n: usize, gens: &[Perm], orbit: &[usize], seed: &[usize]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    let mut queue = Vec::new();
    for &s in &seed[1..] {
        if uf.union(seed[0], s) {
            queue.push((seed[0], s));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for &x in orbit {
        let r = uf.find(x);
        if root_slot[r] == usize::MAX {
            root_slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[root_slot[r]].push(x);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

/// The action induced on the blocks of an invariant partition.
pub fn block_action(p: &Perm, blocks: &[Vec<usize>]) -> Perm {
    let mut owner = vec![usize::MAX; p.degree()];
    for (k, b) in blocks.iter().enumerate() {
        for &x in b {
            owner[x] = k;
        }
    }
    let images = blocks.iter().map(|b| owner[p.apply(b[0])]).collect();
    Perm { images }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if two classes were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let c = compose(&p("(1 2)", 3), &p("(2 3)", 3));
        assert_eq!(c, p("(1 2 3)", 3));
        assert_eq!(c.to_string(), "(1 2 3)");
    }

    #[test]
    fn display_round_trips() {
        for s in ["()", "(1 2)(3 4)", "(1 4 2)", "(2 5)(3 6 4)"] {
            assert_eq!(p(s, 6).to_string(), s);
        }
        assert_eq!(p("(1,2)", 3).to_string(), "(1 2)");
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(Perm::parse("(1 1)", 3).is_err());
        assert!(Perm::parse("(1 4)", 3).is_err());
        assert!(Perm::parse("1 2", 3).is_err());
        assert!(Perm::parse("(1 2", 3).is_err());
        assert!(Perm::parse("(1 2)(2 3)", 3).is_err());
    }

    #[test]
    fn sign_and_cycle_type() {
        let x = p("(1 2 3)(4 5)", 6);
        assert_eq!(x.cycle_type(), vec![3, 2, 1]);
        assert_eq!(x.sign(), -1);
        assert_eq!(x.order(), 6);
        assert_eq!(x.ramification(), 3);
        assert_eq!(x.pow(6), Perm::identity(6));
        assert_eq!(x.pow(-1), x.inverse());
    }

    #[test]
    fn product_and_commutator() {
        let a = p("(1 2 3)", 3);
        let b = p("(1 2)", 3);
        assert_eq!(product(3, [&a, &b]), compose(&a, &b));
        let c = commutator(&a, &b);
        assert_eq!(c, compose(&compose(&a, &b), &compose(&a.inverse(), &b.inverse())));
        assert!(!c.is_odd());
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let x = p("(1 2)(3 4)", 4);
        let c = p("(2 3)", 4);
        assert_eq!(x.conjugate_by(&c), p("(1 3)(2 4)", 4));
    }

    #[test]
    fn orbits_of_intransitive_group() {
        let gens = [p("(1 2)", 5), p("(3 4)", 5)];
        assert_eq!(orbits(5, &gens), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn dihedral_square_has_one_block_system() {
        let gens = [p("(1 2 3 4)", 4), p("(2 4)", 4)];
        let sys = block_systems(4, &gens);
        assert_eq!(sys, vec![vec![vec![0, 2], vec![1, 3]]]);
    }

    #[test]
    fn klein_four_has_three_block_systems() {
        let gens = [p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)];
        assert_eq!(block_systems(4, &gens).len(), 3);
    }

    #[test]
    fn symmetric_group_is_primitive() {
        let gens = [p("(1 2 3 4 5 6)", 6), p("(1 2)", 6)];
        assert!(block_systems(6, &gens).is_empty());
    }

    #[test]
    fn cyclic_of_order_eight_has_nested_blocks() {
        let gens = [p("(1 2 3 4 5 6 7 8)", 8)];
        let sizes: Vec<usize> = block_systems(8, &gens).iter().map(|s| s[0].len()).collect();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn all_perms_counts() {
        assert_eq!(all_perms(0).len(), 1);
        assert_eq!(all_perms(4).len(), 24);
        let five = all_perms(5);
        assert_eq!(five.len(), 120);
        assert!(five.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sign_is_multiplicative() {
        let all = all_perms(4);
        for a in &all {
            for b in &all {
                assert_eq!(compose(a, b).sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn block_systems_are_exhaustive_on_small_groups() {
        let groups: Vec<Vec<Perm>> = vec![
            vec![p("(1 2 3 4 5 6)", 6)],
            vec![p("(1 2 3 4 5 6)", 6), p("(2 6)(3 5)", 6)],
            vec![p("(1 2)(3 4)(5 6)", 6), p("(1 3 5)(2 4 6)", 6)],
            vec![p("(1 2 3 4)(5 6 7 8)", 8), p("(1 5)(2 6)(3 7)(4 8)", 8)],
        ];
        for gens in groups {
            let n = gens[0].degree();
            let found = block_systems(n, &gens);
            let brute = brute_block_systems(n, &gens);
            assert_eq!(found.len(), brute, "gens {gens:?}");
            for sys in &found {
                for g in &gens {
                    let mut imgs: Vec<Vec<usize>> = sys
                        .iter()
                        .map(|b| {
                            let mut v: Vec<usize> = b.iter().map(|&x| g.apply(x)).collect();
                            v.sort_unstable();
                            v
                        })
                        .collect();
                    imgs.sort();
                    assert_eq!(&imgs, sys);
                }
            }
        }
    }

    /// Counts invariant partitions with equal non-trivial blocks by brute force
    /// over set partitions (restricted growth strings).
    fn brute_block_systems(n: usize, gens: &[Perm]) -> usize {
        fn rec(k: usize, n: usize, rgs: &mut Vec<usize>, max: usize, gens: &[Perm], count: &mut usize) {
            if k == n {
                let blocks = max;
                if blocks <= 1 || blocks == n || !n.is_multiple_of(blocks) {
                    return;
                }
                let mut sizes = vec![0; blocks];
                for &b in rgs.iter() {
                    sizes[b] += 1;
                }
                if sizes.iter().any(|&s| s != n / blocks) {
                    return;
                }
                let ok = gens.iter().all(|g| {
                    (0..n).all(|x| (0..n).all(|y| (rgs[x] == rgs[y]) == (rgs[g.apply(x)] == rgs[g.apply(y)])))
                });
                if ok {
                    *count += 1;
                }
                return;
            }
            for b in 0..=max {
                rgs.push(b);
                rec(k + 1, n, rgs, max.max(b + 1), gens, count);
                rgs.pop();
            }
        }
        let mut count = 0;
        rec(0, n, &mut Vec::new(), 0, gens, &mut count);
        count
    }

    #[test]
    fn block_action_on_pairs() {
        let x = p("(1 3)(2 4)", 4);
        let blocks = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(block_action(&x, &blocks), p("(1 2)", 2));
    }
}
