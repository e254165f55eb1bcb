//! The direct image `f_*C~` of a double cover `C~ → C` under a degree-`n`
//! map `f: C → K`, read off the section representation, and its bigonal,
//! trigonal and tetragonal specializations.
//!
//! The sheets of `f_*C~` over a base point are the `2^n` sections of the
//! tower, numbered as in [`crate::weyl`]. A construction producing a new tower
//! picks a set of `2m` sections closed under the monodromy and the flip, and
//! numbers them as points `2j + s` of a tower of degree `m`.

mod bigonal;
mod hyperelliptic;
mod local;
mod tetragonal;
mod trigonal;

pub use bigonal::{
    bigonal, bigonal_diagram, branch_exchange, diagram_generators, wc2_subgroup_classes, wc2_subgroups, BranchCount,
    DiagramCurve,
};
pub use hyperelliptic::{
    cartesian_factors, factors_through_hyperelliptic, fiber_product, is_cartesian, relative_orientation,
    HyperellipticFactor, MorphismDefect,
};
pub use local::{describe_cycle_type, describe_signed, local_picture, local_tags, Construction, LocalPictureTag};
pub use tetragonal::tetragonal;
pub use trigonal::{trigonal_forward, trigonal_inverse};

use std::collections::HashMap;

use crate::cover::{FiberPoint, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::weyl::{orientation_char, section_action, unembed, SignedPerm};

/// Largest tower degree accepted by [`direct_image`].
pub const MAX_DIRECT_IMAGE_DEGREE: usize = 8;

/// `f_*C~` with its flip, its quotient by the flip and the orientation cover.
#[derive(Clone, Debug)]
pub struct DirectImage {
    pub cover: MonodromyCover,
    pub iota: Perm,
    pub class_quotient: MonodromyCover,
    pub orientation: MonodromyCover,
}

impl DirectImage {
    /// Degrees of the connected components, ascending by smallest section.
    pub fn component_degrees(&self) -> Vec<usize> {
        self.cover.components().iter().map(Vec::len).collect()
    }
}

pub fn direct_image(t: &SignedTower) -> Result<DirectImage> {
    let n = t.degree();
    if n > MAX_DIRECT_IMAGE_DEGREE {
        return Err(Error::TooLarge(format!("direct image of a degree-{n} tower")));
    }
    let act = |gs: &[SignedPerm]| gs.iter().map(section_action).collect::<Result<Vec<_>>>();
    let cover = MonodromyCover::new(t.base().clone(), 1 << n, act(t.handles())?, act(t.branches())?)?;
    let mask = (1usize << n) - 1;
    let iota = Perm::from_images((0..1usize << n).map(|x| x ^ mask).collect())?;
    let classes = |gs: &[SignedPerm]| gs.iter().map(crate::weyl::class_action).collect::<Result<Vec<_>>>();
    let class_quotient =
        MonodromyCover::new(t.base().clone(), 1 << (n - 1), classes(t.handles())?, classes(t.branches())?)?;
    let orient = |gs: &[SignedPerm]| gs.iter().map(|g| two_point(orientation_char(g) == 1)).collect::<Vec<_>>();
    let orientation = MonodromyCover::new(t.base().clone(), 2, orient(t.handles()), orient(t.branches()))?;
    Ok(DirectImage { cover, iota, class_quotient, orientation })
}

fn two_point(swap: bool) -> Perm {
    if swap {
        Perm::transposition(2, 0, 1)
    } else {
        Perm::identity(2)
    }
}

/// The double cover of the base given by the sign of each permutation.
pub fn orientation_cover(c: &MonodromyCover) -> MonodromyCover {
    let sign = |ps: &[Perm]| ps.iter().map(|p| two_point(p.is_odd())).collect::<Vec<_>>();
    MonodromyCover::new(c.base().clone(), 2, sign(c.handles()), sign(c.branches()))
        .expect("signs of a product-one tuple multiply to one")
}

/// Sections arranged as the sheets of a cover or the points `2j + s` of a tower.
pub(crate) struct SheetLayout {
    sections: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SheetLayout {
    pub(crate) fn new(sections: Vec<u64>) -> Self {
        let index = sections.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        SheetLayout { sections, index }
    }

    pub(crate) fn perm(&self, g: &SignedPerm) -> Result<Perm> {
        let images = self
            .sections
            .iter()
            .map(|&t| {
                let u = crate::weyl::act_on_section(g, t);
                self.index
                    .get(&u)
                    .copied()
                    .ok_or_else(|| Error::Precondition(format!("section block not preserved by {g}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    pub(crate) fn signed(&self, g: &SignedPerm) -> Result<SignedPerm> {
        let p = self.perm(g)?;
        unembed(&p).ok_or_else(|| Error::Precondition(format!("block action of {g} does not commute with the flip")))
    }

    pub(crate) fn tower(&self, t: &SignedTower) -> Result<SignedTower> {
        let map = |gs: &[SignedPerm]| gs.iter().map(|g| self.signed(g)).collect::<Result<Vec<_>>>();
        SignedTower::new(t.base().clone(), self.sections.len() / 2, map(t.handles())?, map(t.branches())?)
    }

    pub(crate) fn cover(&self, t: &SignedTower) -> Result<MonodromyCover> {
        let map = |gs: &[SignedPerm]| gs.iter().map(|g| self.perm(g)).collect::<Result<Vec<_>>>();
        MonodromyCover::new(t.base().clone(), self.sections.len(), map(t.handles())?, map(t.branches())?)
    }
}

/// Pairs `{t, !t}` of `n`-bit sections from `block`, as points `2j + s` with
/// `j` ordered by the smaller member and `s = 0` on it.
pub(crate) fn flip_pairs(n: usize, block: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mask = (1u64 << n) - 1;
    let mut reps: Vec<u64> = block.into_iter().filter(|&t| t < t ^ mask).collect();
    reps.sort_unstable();
    reps.into_iter().flat_map(|t| [t, t ^ mask]).collect()
}

/// Points of `C` over `label` where `C~ → C` is branched.
pub(crate) fn ramified_at(t: &SignedTower, label: usize) -> Vec<FiberPoint> {
    t.ramified_points().into_iter().filter(|p| p.label == label).collect()
}

/// The node of `C~` joining the two branched points over `label`.
pub(crate) fn glue_ramified_pair(t: &SignedTower, label: usize) -> Result<(FiberPoint, FiberPoint)> {
    let ram = ramified_at(t, label);
    if ram.len() != 2 {
        return Err(unsupported(t, label, format!("{} branched points where two are to be glued", ram.len())));
    }
    Ok((t.lifts(ram[0])[0], t.lifts(ram[1])[0]))
}

pub(crate) fn unsupported(t: &SignedTower, label: usize, detail: String) -> Error {
    Error::UnsupportedLocalPicture { label: t.base().labels()[label].clone(), detail }
}

pub(crate) fn require_rational(t: &SignedTower, n: usize, what: &str) -> Result<()> {
    if t.degree() != n {
        return Err(Error::DegreeMismatch(format!("{what} construction needs degree {n}, got {}", t.degree())));
    }
    if t.base().genus() != 0 {
        return Err(Error::Precondition(format!("{what} construction needs a rational base")));
    }
    Ok(())
}

pub(crate) fn require_orientable(t: &SignedTower) -> Result<()> {
    for (k, g) in t.generators().iter().enumerate() {
        if orientation_char(g) == 1 {
            return Err(Error::Precondition(format!(
                "non-orientable: generator {} has an odd number of sign changes",
                k + 1
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::product;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    #[test]
    fn split_tower_over_s4_cover_has_weight_components() {
        let branches = vec![p("(1 2)", 4), p("(1 2 3 4)", 4), p("(1 2 3)", 4)];
        let last = product(4, branches.iter()).inverse();
        let mut all = branches;
        all.push(last);
        let c = MonodromyCover::rational(4, all).unwrap();
        let d = direct_image(&SignedTower::split(&c)).unwrap();
        let mut degrees = d.component_degrees();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 4, 4, 6]);
    }

    #[test]
    fn trivial_tower_gives_trivial_components() {
        let t = SignedTower::rational(3, vec![SignedPerm::identity(3); 2]).unwrap();
        assert_eq!(direct_image(&t).unwrap().component_degrees(), vec![1; 8]);
    }

    #[test]
    fn flip_commutes_with_monodromy() {
        let g = SignedPerm::new(p("(1 3 2)", 3), 0b011).unwrap();
        let t = SignedTower::rational(3, vec![g.clone(), g.inverse()]).unwrap();
        let d = direct_image(&t).unwrap();
        for x in d.cover.generators() {
            assert_eq!(crate::compose(&x, &d.iota), crate::compose(&d.iota, &x));
        }
        assert_eq!(d.class_quotient.degree(), 4);
    }

    #[test]
    fn orientation_cover_reads_signs() {
        let c =
            MonodromyCover::rational(3, vec![p("(1 2)", 3), p("(1 2)", 3), p("(1 2 3)", 3), p("(1 3 2)", 3)]).unwrap();
        let o = orientation_cover(&c);
        assert!(o.branches()[0].apply(0) == 1 && o.branches()[2].is_identity());
        assert!(o.is_connected());
    }
}
