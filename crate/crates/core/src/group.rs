//! Stabilizer chains, element enumeration and conjugacy search.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::perm::{compose, Perm};

/// Largest degree accepted by [`StabChain::new`].
pub const MAX_CHAIN_DEGREE: usize = 32;

/// Largest group [`enumerate`] and [`simultaneous_conjugacy`] will walk.
pub const MAX_ENUMERATION: usize = 100_000;

struct Level {
    base: usize,
    /// `transversal[x]` maps the base point to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn build(n: usize, base: usize, gens: &[&Perm]) -> Self {
        let mut transversal: Vec<Option<Perm>> = vec![None; n];
        transversal[base] = Some(Perm::identity(n));
        let mut orbit = vec![base];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in gens {
                let y = g.apply(x);
                if transversal[y].is_none() {
                    let ux = transversal[x].as_ref().expect("orbit point has transversal");
                    transversal[y] = Some(compose(g, ux));
                    orbit.push(y);
                }
            }
        }
        Level { base, transversal, orbit }
    }
}

/// A base and strong generating set built by the deterministic Schreier–Sims algorithm.
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(n: usize, gens: &[Perm]) -> Result<Self> {
        Self::with_base(n, gens, &[])
    }

    /// Like [`StabChain::new`] but the base starts with `prefix`.
    pub fn with_base(n: usize, gens: &[Perm], prefix: &[usize]) -> Result<Self> {
        if n > MAX_CHAIN_DEGREE {
            return Err(Error::TooLarge(format!("degree {n} exceeds stabilizer chain bound {MAX_CHAIN_DEGREE}")));
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != n) {
            return Err(Error::InvalidPermutation(format!("generator of degree {} in degree {n} group", g.degree())));
        }
        let mut base: Vec<usize> = prefix.to_vec();
        let mut strong: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(first_moved(g));
            }
        }
        let fixes_prefix = |g: &Perm, base: &[usize], i: usize| base[..i].iter().all(|&b| g.apply(b) == b);
        // levels[k] is valid whenever k > i during the main loop
        let mut levels: Vec<Option<Level>> = (0..base.len()).map(|_| None).collect();
        let mut i = base.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let level_gens: Vec<&Perm> = strong.iter().filter(|g| fixes_prefix(g, &base, iu)).collect();
            let level = Level::build(n, base[iu], &level_gens);
            let mut added: Option<(Perm, usize)> = None;
            {
                let deeper: Vec<&Level> =
                    levels[iu + 1..].iter().map(|l| l.as_ref().expect("deeper level built")).collect();
                'search: for &beta in &level.orbit {
                    for s in &level_gens {
                        let u_beta = level.transversal[beta].as_ref().expect("orbit point");
                        let u_img = level.transversal[s.apply(beta)].as_ref().expect("orbit closed");
                        let schreier = compose(&u_img.inverse(), &compose(s, u_beta));
                        let (h, j) = sift_levels(&deeper, &schreier);
                        if !h.is_identity() {
                            added = Some((h, iu + 1 + j));
                            break 'search;
                        }
                    }
                }
            }
            levels[iu] = Some(level);
            match added {
                Some((h, j)) => {
                    if j == base.len() {
                        base.push(first_moved(&h));
                        levels.push(None);
                    }
                    strong.push(h);
                    for l in levels.iter_mut().take(j + 1) {
                        *l = None;
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        let levels = levels.into_iter().map(|l| l.expect("all levels built")).collect();
        Ok(StabChain { n, levels })
    }

    fn sift(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let (h, j) = sift_levels(&self.levels[from.min(self.levels.len())..].iter().collect::<Vec<_>>(), g);
        (h, from + j)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.n && {
            let (h, _) = self.sift(g, 0);
            h.is_identity()
        }
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Sizes of the basic orbits, in base order.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }
}

fn first_moved(g: &Perm) -> usize {
    (0..g.degree()).find(|&i| g.apply(i) != i).expect("non-identity element moves a point")
}

fn sift_levels<L: std::borrow::Borrow<Level>>(levels: &[L], g: &Perm) -> (Perm, usize) {
    let mut h = g.clone();
    for (i, lvl) in levels.iter().enumerate() {
        let lvl = lvl.borrow();
        let beta = h.apply(lvl.base);
        match &lvl.transversal[beta] {
            Some(u) => h = compose(&u.inverse(), &h),
            None => return (h, i),
        }
    }
    (h, levels.len())
}

/// Order of the group generated by `gens` on `n` points.
pub fn group_order(n: usize, gens: &[Perm]) -> Result<u128> {
    Ok(StabChain::new(n, gens)?.order())
}

/// Order of the stabilizer of `point`.
pub fn stabilizer_order(n: usize, gens: &[Perm], point: usize) -> Result<u128> {
    let chain = StabChain::with_base(n, gens, &[point])?;
    Ok(chain.order() / chain.orbit_sizes()[0] as u128)
}

/// All elements of the group generated by `gens`, identity first, in breadth-first order.
pub fn enumerate(n: usize, gens: &[Perm]) -> Result<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                if out.len() >= MAX_ENUMERATION {
                    return Err(Error::TooLarge(format!("group exceeds {MAX_ENUMERATION} elements")));
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

#[inline]
fn conjugates(c: &Perm, a: &[Perm], b: &[Perm]) -> bool {
    a.iter().zip(b).all(|(ai, bi)| (0..c.degree()).all(|x| c.apply(ai.apply(x)) == bi.apply(c.apply(x))))
}

/// Some `c` in `elements` with `c a_i c^-1 = b_i` for all `i`.
pub fn conjugator_in<'a>(a: &[Perm], b: &[Perm], elements: &'a [Perm]) -> Option<&'a Perm> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.cycle_type() != y.cycle_type()) {
        return None;
    }
    elements.iter().find(|c| conjugates(c, a, b))
}

/// Exhaustive search over the group generated by `g` for a simultaneous conjugator.
pub fn simultaneous_conjugacy(a: &[Perm], b: &[Perm], g: &[Perm]) -> Result<Option<Perm>> {
    if a.len() != b.len() {
        return Err(Error::InvalidPermutation("tuples of different length".into()));
    }
    let n = a.first().or(g.first()).map_or(0, Perm::degree);
    let elements = enumerate(n, g)?;
    Ok(conjugator_in(a, b, &elements).cloned())
}

/// Every `c` in the full symmetric group with `c a_i c^-1 = b_i`, found by
/// propagating the value of `c` along orbits of `<a>`.
pub fn symmetric_conjugators(n: usize, a: &[Perm], b: &[Perm]) -> Vec<Perm> {
    let mut out = Vec::new();
    find_symmetric_conjugator(n, a, b, |c| {
        out.push(c.clone());
        false
    });
    out
}

/// First conjugator `c` (as in [`symmetric_conjugators`]) accepted by `accept`.
pub fn find_symmetric_conjugator<F>(n: usize, a: &[Perm], b: &[Perm], mut accept: F) -> Option<Perm>
where
    F: FnMut(&Perm) -> bool,
{
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.degree() != n || y.degree() != n) {
        return None;
    }
    if a.iter().zip(b).any(|(x, y)| x.cycle_type() != y.cycle_type()) {
        return None;
    }
    let orbit_reps: Vec<usize> = crate::perm::orbits(n, a).iter().map(|o| o[0]).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_conjugator(n, a, b, &orbit_reps, 0, &mut image, &mut used, &mut accept)
}

#[allow(clippy::too_many_arguments)]
fn extend_conjugator<F>(
    n: usize,
    a: &[Perm],
    b: &[Perm],
    reps: &[usize],
    k: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    accept: &mut F,
) -> Option<Perm>
where
    F: FnMut(&Perm) -> bool,
{
    if k == reps.len() {
        let c = Perm::from_images(image.clone()).expect("conjugator is a bijection");
        return if accept(&c) { Some(c) } else { None };
    }
    let r = reps[k];
    for y in 0..n {
        if used[y] {
            continue;
        }
        let saved_image = image.clone();
        let saved_used = used.clone();
        if propagate(a, b, r, y, image, used) {
            if let Some(c) = extend_conjugator(n, a, b, reps, k + 1, image, used, accept) {
                return Some(c);
            }
        }
        *image = saved_image;
        *used = saved_used;
    }
    None
}

fn propagate(a: &[Perm], b: &[Perm], x0: usize, y0: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    image[x0] = y0;
    used[y0] = true;
    let mut stack = vec![x0];
    while let Some(x) = stack.pop() {
        let y = image[x];
        for (ai, bi) in a.iter().zip(b) {
            let (x2, y2) = (ai.apply(x), bi.apply(y));
            if image[x2] == usize::MAX {
                if used[y2] {
                    return false;
                }
                image[x2] = y2;
                used[y2] = true;
                stack.push(x2);
            } else if image[x2] != y2 {
                return false;
            }
        }
    }
    true
}

/// A small generating set for the group whose elements are `elements`.
pub fn generators_of(n: usize, elements: &[Perm]) -> Vec<Perm> {
    let target = elements.len() as u128;
    let mut gens: Vec<Perm> = Vec::new();
    for e in elements {
        if group_order(n, &gens).map(|o| o == target).unwrap_or(false) {
            break;
        }
        let chain = StabChain::new(n, &gens).expect("degree checked by caller");
        if !chain.contains(e) {
            gens.push(e.clone());
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    fn sym(n: usize) -> Vec<Perm> {
        let cyc: Vec<usize> = (0..n).collect();
        vec![Perm::from_cycles(n, &[cyc]).unwrap(), Perm::transposition(n, 0, 1)]
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(group_order(4, &sym(4)).unwrap(), 24);
        assert_eq!(group_order(3, &[]).unwrap(), 1);
        assert_eq!(group_order(10, &sym(10)).unwrap(), 3_628_800);
        assert_eq!(group_order(32, &sym(32)).unwrap(), (1..=32u128).product());
        assert!(group_order(33, &[]).is_err());
    }

    #[test]
    fn chain_agrees_with_enumeration() {
        let cases: Vec<(usize, Vec<Perm>)> = vec![
            (6, vec![p("(1 2 3)(4 5)", 6), p("(1 4)(2 6)", 6)]),
            (7, vec![p("(1 2 3 4 5 6 7)", 7), p("(2 3 5)(4 7 6)", 7)]),
            (8, vec![p("(1 2)(3 4)", 8), p("(1 3)(5 7)", 8), p("(2 6 4 8)", 8)]),
            (5, sym(5)),
        ];
        for (n, gens) in cases {
            let brute = enumerate(n, &gens).unwrap().len() as u128;
            assert_eq!(group_order(n, &gens).unwrap(), brute);
        }
    }

    #[test]
    fn membership() {
        let a4 = [p("(1 2 3)", 4), p("(2 3 4)", 4)];
        let chain = StabChain::new(4, &a4).unwrap();
        assert_eq!(chain.order(), 12);
        assert!(chain.contains(&p("(1 2)(3 4)", 4)));
        assert!(!chain.contains(&p("(1 2)", 4)));
    }

    #[test]
    fn stabilizer_of_point() {
        assert_eq!(stabilizer_order(5, &sym(5), 3).unwrap(), 24);
    }

    #[test]
    fn conjugacy_examples() {
        let s3 = sym(3);
        let a = [p("(1 2)", 3)];
        assert!(simultaneous_conjugacy(&a, &a, &s3).unwrap().unwrap().is_identity());
        let b = [p("(2 3)", 3)];
        let c = simultaneous_conjugacy(&a, &b, &s3).unwrap().unwrap();
        assert_eq!(a[0].conjugate_by(&c), b[0]);
        let a4 = [p("(1 2)", 4)];
        let b4 = [p("(1 2)(3 4)", 4)];
        assert!(simultaneous_conjugacy(&a4, &b4, &sym(4)).unwrap().is_none());
    }

    #[test]
    fn symmetric_conjugators_match_exhaustive_search() {
        let a = [p("(1 2 3)(4 5)", 5), p("(1 4)", 5)];
        let c = p("(1 5 2)(3 4)", 5);
        let b: Vec<Perm> = a.iter().map(|x| x.conjugate_by(&c)).collect();
        let found = symmetric_conjugators(5, &a, &b);
        let all = enumerate(5, &sym(5)).unwrap();
        let brute: Vec<&Perm> = all.iter().filter(|x| conjugates(x, &a, &b)).collect();
        assert_eq!(found.len(), brute.len());
        assert!(found.contains(&c));
    }

    #[test]
    fn generating_set_spans() {
        let all = enumerate(4, &sym(4)).unwrap();
        let gens = generators_of(4, &all);
        assert!(gens.len() <= 3);
        assert_eq!(group_order(4, &gens).unwrap(), 24);
    }
}
