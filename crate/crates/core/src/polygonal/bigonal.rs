//! The bigonal construction and the subgroup diagram of `WC_2`.

use std::collections::{BTreeSet, HashMap};

use super::{unsupported, SheetLayout};
use crate::cover::{FiberPoint, GluedTower, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::weyl::{enumerate_wc, sp_compose, SignedPerm};

/// Sections `00, 11, 01, 10` become the points `(0,0), (0,1), (1,0), (1,1)`.
const SECTIONS: [u64; 4] = [0, 3, 1, 2];

fn is_double_flip(g: &SignedPerm) -> bool {
    g.sigma().is_identity() && g.eps() == 0b11
}

/// Labels carrying a `∂III` node, after checking that every node is one.
fn glued_labels(t: &GluedTower) -> Result<Vec<bool>> {
    let tower = t.tower();
    let mut glued = vec![false; tower.branches().len()];
    for &(a, b) in t.nodes() {
        let ok = a.label == b.label && is_double_flip(&tower.branches()[a.label]) && (a.cycle, b.cycle) == (0, 1);
        if !ok {
            return Err(unsupported(
                tower,
                a.label,
                "a node not joining the two branched points of an étale fiber".into(),
            ));
        }
        glued[a.label] = true;
    }
    Ok(glued)
}

/// `C~' → C' → K`: `C'` is the orientation cover and `C~'` the direct image.
///
/// Over a label where the input is branched at both points of an étale fiber,
/// the two branched points of the output are glued; where the input is such a
/// glued fiber, the output is left smooth.
pub fn bigonal(t: &GluedTower) -> Result<GluedTower> {
    let tower = t.tower();
    if tower.degree() != 2 {
        return Err(Error::DegreeMismatch(format!("bigonal construction needs degree 2, got {}", tower.degree())));
    }
    let glued = glued_labels(t)?;
    let out = SheetLayout::new(SECTIONS.to_vec()).tower(tower)?;
    let nodes = out
        .branches()
        .iter()
        .enumerate()
        .filter(|&(k, g)| is_double_flip(g) && !glued[k])
        .map(|(k, _)| (FiberPoint::new(k, 0), FiberPoint::new(k, 1)))
        .collect();
    GluedTower::new(out, nodes)
}

/// Branch multiplicities over one label before and after the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchCount {
    pub label: usize,
    pub f: usize,
    pub g: usize,
    pub f_out: usize,
    pub g_out: usize,
}

impl BranchCount {
    /// `f'` is branched where `g` is, and `f` where `g'` is.
    pub fn exchanged(&self) -> bool {
        self.f_out == self.g && self.f == self.g_out
    }
}

/// Contribution of `f` over `label`, a glued fiber counting twice.
fn branch_f(t: &GluedTower, glued: &[bool], label: usize) -> usize {
    if glued[label] {
        2
    } else {
        usize::from(!t.tower().branches()[label].sigma().is_identity())
    }
}

/// Branched points of `g` over `label` that are not glued.
fn branch_g(t: &GluedTower, glued: &[bool], label: usize) -> usize {
    if glued[label] {
        0
    } else {
        super::ramified_at(t.tower(), label).len()
    }
}

pub fn branch_exchange(input: &GluedTower, output: &GluedTower) -> Result<Vec<BranchCount>> {
    let (gi, go) = (glued_labels(input)?, glued_labels(output)?);
    Ok((0..input.tower().branches().len())
        .map(|label| BranchCount {
            label,
            f: branch_f(input, &gi, label),
            g: branch_g(input, &gi, label),
            f_out: branch_f(output, &go, label),
            g_out: branch_g(output, &go, label),
        })
        .collect())
}

/// A quotient of the Galois closure of a degree-2 tower.
#[derive(Clone, Debug)]
pub struct DiagramCurve {
    pub name: &'static str,
    pub subgroup: Vec<SignedPerm>,
    pub cover: MonodromyCover,
}

fn closure(gens: &[SignedPerm]) -> Vec<SignedPerm> {
    let mut set = BTreeSet::from([SignedPerm::identity(2)]);
    let mut frontier = vec![SignedPerm::identity(2)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = sp_compose(g, &x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// The reflection `f` fixing the point `(0,0)` and the rotation `r` with `fr` the
/// diagonal reflection `(swap, 11)`.
pub fn diagram_generators() -> (SignedPerm, SignedPerm) {
    let f = SignedPerm::new(Perm::identity(2), 0b10).expect("two letters");
    let r = SignedPerm::new(Perm::transposition(2, 0, 1), 0b10).expect("two letters");
    (f, r)
}

/// The eight curves attached to the subgroup classes of `WC_2`, each the
/// action of the monodromy on the cosets of its subgroup.
pub fn bigonal_diagram(t: &SignedTower) -> Result<Vec<DiagramCurve>> {
    if t.degree() != 2 {
        return Err(Error::DegreeMismatch(format!("bigonal diagram needs degree 2, got {}", t.degree())));
    }
    let (f, r) = diagram_generators();
    let r2 = sp_compose(&r, &r);
    let fr = sp_compose(&f, &r);
    let named: [(&'static str, Vec<SignedPerm>); 8] = [
        ("C~~", vec![]),
        ("C~", vec![f.clone()]),
        ("CxC'", vec![r2.clone()]),
        ("C~'", vec![fr.clone()]),
        ("C", vec![f.clone(), r2.clone()]),
        ("C''", vec![r.clone()]),
        ("C'", vec![fr, r2]),
        ("K", vec![f, r]),
    ];
    let elements = enumerate_wc(2);
    named
        .into_iter()
        .map(|(name, gens)| {
            let subgroup = closure(&gens);
            let cover = coset_cover(t, &elements, &subgroup)?;
            Ok(DiagramCurve { name, subgroup, cover })
        })
        .collect()
}

fn coset_cover(t: &SignedTower, elements: &[SignedPerm], subgroup: &[SignedPerm]) -> Result<MonodromyCover> {
    let coset = |g: &SignedPerm| -> BTreeSet<SignedPerm> { subgroup.iter().map(|h| sp_compose(g, h)).collect() };
    let mut index: HashMap<BTreeSet<SignedPerm>, usize> = HashMap::new();
    let mut reps = Vec::new();
    for g in elements {
        let c = coset(g);
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(c) {
            e.insert(reps.len());
            reps.push(g.clone());
        }
    }
    let act = |x: &SignedPerm| -> Result<Perm> {
        Perm::from_images(reps.iter().map(|g| index[&coset(&sp_compose(x, g))]).collect())
    };
    let map = |gs: &[SignedPerm]| gs.iter().map(act).collect::<Result<Vec<_>>>();
    MonodromyCover::new(t.base().clone(), reps.len(), map(t.handles())?, map(t.branches())?)
}

/// All subgroups of `WC_2`, as sorted element lists.
pub fn wc2_subgroups() -> Vec<Vec<SignedPerm>> {
    let elements = enumerate_wc(2);
    let mut out = BTreeSet::new();
    for a in &elements {
        for b in &elements {
            out.insert(closure(&[a.clone(), b.clone()]));
        }
    }
    out.into_iter().collect()
}

/// Number of conjugacy classes among [`wc2_subgroups`].
pub fn wc2_subgroup_classes() -> usize {
    let elements = enumerate_wc(2);
    let mut classes: BTreeSet<Vec<SignedPerm>> = BTreeSet::new();
    for s in wc2_subgroups() {
        let orbit: BTreeSet<Vec<SignedPerm>> = elements
            .iter()
            .map(|c| {
                let mut conj: Vec<SignedPerm> = s.iter().map(|h| h.conjugate_by(c)).collect();
                conj.sort();
                conj
            })
            .collect();
        classes.insert(orbit.into_iter().next().expect("nonempty orbit"));
    }
    classes.len()
}

/// Whether `C~` over `label` is a single point on 4 sheets, i.e. the embedded
/// element is a 4-cycle.
#[cfg(test)]
pub(crate) fn fully_branched(g: &SignedPerm) -> bool {
    crate::weyl::embed_2n(g).cycle_type() == vec![4]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{covers_isomorphic, glued_towers_isomorphic};
    use crate::polygonal::orientation_cover;

    fn sp(sigma: &str, eps: u64) -> SignedPerm {
        SignedPerm::new(Perm::parse(sigma, 2).unwrap(), eps).unwrap()
    }

    fn sample() -> SignedTower {
        // swap/01, id/11, swap/10, id/01 ... closed by the last factor
        let gs = vec![sp("(1 2)", 0b01), sp("()", 0b11), sp("(1 2)", 0b00), sp("()", 0b01)];
        let last = crate::weyl::sp_product(2, gs.iter()).inverse();
        let mut all = gs;
        all.push(last);
        SignedTower::rational(2, all).unwrap()
    }

    #[test]
    fn local_cases_match_the_list() {
        let out = |g: SignedPerm| SheetLayout::new(SECTIONS.to_vec()).signed(&g).unwrap();
        assert_eq!(out(sp("()", 0)), sp("()", 0));
        assert_eq!(out(sp("()", 0b01)).sigma(), &Perm::parse("(1 2)", 2).unwrap());
        assert_eq!(out(sp("()", 0b01)).eps().count_ones() % 2, 0);
        let iii = out(sp("(1 2)", 0));
        assert!(iii.sigma().is_identity() && iii.eps().count_ones() == 1);
        assert!(fully_branched(&out(sp("(1 2)", 0b01))));
        assert_eq!(out(sp("()", 0b11)), sp("()", 0b11));
    }

    #[test]
    fn involutive_with_gluing() {
        let t = GluedTower::smooth(sample());
        let once = bigonal(&t).unwrap();
        assert!(!once.nodes().is_empty());
        let twice = bigonal(&once).unwrap();
        assert!(glued_towers_isomorphic(&t, &twice).unwrap());
        for row in branch_exchange(&t, &once).unwrap() {
            assert!(row.exchanged(), "{row:?}");
        }
    }

    #[test]
    fn diagram_quotients() {
        let t = sample();
        let d = bigonal_diagram(&t).unwrap();
        let degrees: Vec<usize> = d.iter().map(|c| c.cover.degree()).collect();
        assert_eq!(degrees, vec![8, 4, 4, 4, 2, 2, 2, 1]);
        let by = |n: &str| d.iter().find(|c| c.name == n).unwrap().cover.clone();
        assert!(covers_isomorphic(&by("C~"), &t.lift()));
        assert!(covers_isomorphic(&by("C"), &t.curve()));
        assert!(covers_isomorphic(&by("C'"), &orientation_cover(&t.lift())));
        let out = bigonal(&GluedTower::smooth(t)).unwrap();
        assert!(covers_isomorphic(&by("C~'"), &out.tower().lift()));
    }

    #[test]
    fn subgroup_classes() {
        assert_eq!(wc2_subgroups().len(), 10);
        assert_eq!(wc2_subgroup_classes(), 8);
    }

    #[test]
    fn orientable_input_splits_the_output() {
        let t = SignedTower::rational(2, vec![sp("(1 2)", 0), sp("()", 0b11), sp("(1 2)", 0b11)]).unwrap();
        let out = bigonal(&GluedTower::smooth(t)).unwrap();
        assert_eq!(out.tower().lift().components().len(), 2);
    }
}
