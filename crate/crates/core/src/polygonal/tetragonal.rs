//! The tetragonal construction.

use super::{
    flip_pairs, glue_ramified_pair, ramified_at, require_orientable, require_rational, unsupported, SheetLayout,
};
use crate::cover::{GluedTower, SignedTower};
use crate::error::Result;

/// Checks that every label is étale for `C~ → C` or carries exactly two
/// branched points glued to each other.
fn check_input(t: &GluedTower) -> Result<()> {
    let tower = t.tower();
    for k in 0..tower.branches().len() {
        let here: Vec<_> = t.nodes().iter().filter(|(a, b)| a.label == k || b.label == k).copied().collect();
        match ramified_at(tower, k).len() {
            0 if here.is_empty() => {}
            2 => {
                let expected = glue_ramified_pair(tower, k)?;
                let expected = if expected.0 <= expected.1 { expected } else { (expected.1, expected.0) };
                if here != [expected] {
                    return Err(unsupported(tower, k, "two branched points that are not glued to each other".into()));
                }
            }
            r => {
                return Err(unsupported(tower, k, format!("{r} branched points with {} nodes", here.len())));
            }
        }
    }
    Ok(())
}

fn output(tower: &SignedTower, parity: u32) -> Result<GluedTower> {
    let block = (0u64..16).filter(|t| t.count_ones() % 2 == parity);
    let out = SheetLayout::new(flip_pairs(4, block)).tower(tower)?;
    let mut nodes = Vec::new();
    for k in 0..out.branches().len() {
        match ramified_at(&out, k).len() {
            0 => {}
            2 => nodes.push(glue_ramified_pair(&out, k)?),
            r => return Err(unsupported(tower, k, format!("output has {r} branched points"))),
        }
    }
    GluedTower::new(out, nodes)
}

/// The two towers `(C~_0 → C_0)`, `(C~_1 → C_1)` carried by the even- and
/// odd-weight halves of `f_*C~`, with two branched points over one label glued.
pub fn tetragonal(t: &GluedTower) -> Result<(GluedTower, GluedTower)> {
    let tower = t.tower();
    require_rational(tower, 4, "tetragonal")?;
    require_orientable(tower)?;
    check_input(t)?;
    Ok((output(tower, 0)?, output(tower, 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::glued_towers_isomorphic;
    use crate::perm::Perm;
    use crate::weyl::{sp_product, SignedPerm};

    fn sp(s: &str, eps: u64) -> SignedPerm {
        SignedPerm::new(Perm::parse(s, 4).unwrap(), eps).unwrap()
    }

    fn closed(mut gs: Vec<SignedPerm>) -> GluedTower {
        gs.push(sp_product(4, gs.iter()).inverse());
        GluedTower::smooth(SignedTower::rational(4, gs).unwrap())
    }

    fn same_pair(a: &(GluedTower, GluedTower), b: &(GluedTower, GluedTower)) -> bool {
        let iso = |x: &GluedTower, y: &GluedTower| glued_towers_isomorphic(x, y).unwrap();
        (iso(&a.0, &b.0) && iso(&a.1, &b.1)) || (iso(&a.0, &b.1) && iso(&a.1, &b.0))
    }

    #[test]
    fn triality_on_an_etale_tower() {
        let branches: Vec<Perm> =
            ["(1 2)", "(2 3 4)", "(1 3)(2 4)", "(1 4)", "(1 2 3)"].iter().map(|s| Perm::parse(s, 4).unwrap()).collect();
        let mut branches = branches;
        branches.push(crate::perm::product(4, branches.iter()).inverse());
        let base = crate::cover::BaseCurve::numbered(0, branches.len());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        let constraints = crate::cover::etale_constraints(&branches);
        let tower = crate::cover::random_signs(&mut rng, &base, &[], &branches, &constraints).unwrap().unwrap();
        let t = GluedTower::smooth(tower);
        let (a, b) = tetragonal(&t).unwrap();
        assert!(same_pair(&tetragonal(&a).unwrap(), &(t.clone(), b.clone())));
        assert!(same_pair(&tetragonal(&b).unwrap(), &(t, a)));
    }

    #[test]
    fn two_simple_points_give_a_beauville_partner() {
        let t = closed(vec![sp("(1 2)(3 4)", 0), sp("(1 2)(3 4)", 0), sp("(1 2 3 4)", 0)]);
        let (a, b) = tetragonal(&t).unwrap();
        let glued: Vec<usize> = [&a, &b].iter().map(|x| x.nodes().iter().filter(|n| n.0.label == 0).count()).collect();
        assert_eq!(glued.iter().sum::<usize>(), 1);
        let (c, d) = tetragonal(if glued[0] == 1 { &a } else { &b }).unwrap();
        assert!(c.tower().branches()[0].sigma().cycle_type() == vec![2, 2]);
        assert!(d.tower().branches()[0].sigma().cycle_type() == vec![2, 2]);
    }

    #[test]
    fn unglued_branching_is_rejected() {
        let t = closed(vec![sp("()", 0b0011), sp("(1 2)", 0)]);
        assert!(matches!(tetragonal(&t), Err(crate::Error::UnsupportedLocalPicture { .. })));
    }
}
