//! Recillas' correspondence between trigonal towers and tetragonal covers.

use std::collections::BTreeSet;

use super::{glue_ramified_pair, require_orientable, require_rational, unsupported, SheetLayout};
use crate::cover::{FiberPoint, GluedCover, GluedTower, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::weyl::SignedPerm;

/// Even-weight sections of three letters: the block of `f_*C~` through `000`.
const EVEN: [u64; 4] = [0b000, 0b011, 0b101, 0b110];

/// Pairs of four sheets as 4-bit masks, arranged as points `2j + s` of a
/// tower: partition `j` into two pairs, `s = 0` on the pair holding sheet 0.
const PAIRS: [u64; 6] = [0b0011, 0b1100, 0b0101, 0b1010, 0b1001, 0b0110];

/// The tetragonal curve `X` of a trigonal tower over a rational base.
///
/// Nodes of `C~` joining two branched points are dropped. A node of `C` at two
/// fixed unbranched points `a, b` of one fiber becomes the nodes of `X` joining
/// the sections `t` and `t + e_a + e_b`, for `t_a = t_b` when `C~` is glued
/// crosswise and for `t_a ≠ t_b` when it is glued straight.
pub fn trigonal_forward(t: &GluedTower) -> Result<GluedCover> {
    let tower = t.tower();
    require_rational(tower, 3, "trigonal")?;
    require_orientable(tower)?;
    let layout = SheetLayout::new(EVEN.to_vec());
    let x = layout.cover(tower)?;
    let mut nodes = BTreeSet::new();
    let curve = tower.curve();
    for (p, q) in t.downstairs_nodes() {
        let (lp, lq) = (tower.lifts(p), tower.lifts(q));
        if lp.len() == 1 && lq.len() == 1 {
            continue;
        }
        let g = &tower.branches()[p.label];
        let (fp, fq) = (&curve.fiber(p.label)[p.cycle], &curve.fiber(q.label)[q.cycle]);
        if lp.len() != 2 || lq.len() != 2 || p.label != q.label || fp.len() != 1 || fq.len() != 1 {
            return Err(unsupported(tower, p.label, "node of C away from two unramified fixed sheets".into()));
        }
        let (a, b) = (fp[0], fq[0]);
        let crosswise = t.nodes().contains(&ordered(lp[0], lq[1])) || t.nodes().contains(&ordered(lp[1], lq[0]));
        for &s in &EVEN {
            let same = (s >> a) & 1 == (s >> b) & 1;
            if same == crosswise {
                let u = s ^ (1 << a) ^ (1 << b);
                let xp = x.point_of_sheet(p.label, sheet_of(s));
                let xq = x.point_of_sheet(p.label, sheet_of(u));
                if xp == xq {
                    return Err(unsupported(tower, p.label, format!("node glues a point of X to itself ({g})")));
                }
                nodes.insert(ordered(xp, xq));
            }
        }
    }
    GluedCover::new(x, nodes.into_iter().collect())
}

fn sheet_of(section: u64) -> usize {
    EVEN.iter().position(|&e| e == section).expect("even-weight section")
}

fn ordered(a: FiberPoint, b: FiberPoint) -> (FiberPoint, FiberPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The trigonal tower of a tetragonal cover: `C~` the pairs of sheets of `X`,
/// `C` the partitions of the four sheets into two pairs.
///
/// Over a label where `X` has no unramified point, the two branched points of
/// `C` are glued.
pub fn trigonal_inverse(x: &MonodromyCover) -> Result<GluedTower> {
    if x.degree() != 4 {
        return Err(Error::DegreeMismatch(format!("trigonal inverse needs degree 4, got {}", x.degree())));
    }
    if x.base().genus() != 0 {
        return Err(Error::Precondition("trigonal inverse needs a rational base".into()));
    }
    let layout = SheetLayout::new(PAIRS.to_vec());
    let lift = |p: &crate::perm::Perm| layout.signed(&SignedPerm::unsigned(p.clone()));
    let branches = x.branches().iter().map(lift).collect::<Result<Vec<_>>>()?;
    let tower = SignedTower::new(x.base().clone(), 3, Vec::new(), branches)?;
    let mut nodes = Vec::new();
    for (k, p) in x.branches().iter().enumerate() {
        if !p.cycle_type().contains(&1) {
            nodes.push(glue_ramified_pair(&tower, k)?);
        }
    }
    GluedTower::new(tower, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_boundary_example, covers_isomorphic, glued_towers_isomorphic, BoundaryKind};
    use crate::perm::{product, Perm};

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    fn closed(mut gs: Vec<Perm>) -> MonodromyCover {
        let n = gs[0].degree();
        gs.push(product(n, gs.iter()).inverse());
        MonodromyCover::rational(n, gs).unwrap()
    }

    #[test]
    fn s4_cover_gives_s3_trigonal_curve() {
        let x = closed(vec![p("(1 2)", 4), p("(1 2 3 4)", 4), p("(1 3)(2 4)", 4), p("(2 3)", 4)]);
        let t = trigonal_inverse(&x).unwrap();
        let c = t.tower().curve();
        assert_eq!(crate::group::group_order(3, &c.generators()).unwrap(), 6);
        let back = trigonal_forward(&t).unwrap();
        assert!(back.nodes().is_empty());
        assert!(covers_isomorphic(back.cover(), &x));
        let again = trigonal_inverse(back.cover()).unwrap();
        assert!(glued_towers_isomorphic(&again, &t).unwrap());
    }

    #[test]
    fn genus_drops_by_one() {
        let branches = vec![p("(1 2)", 3), p("(1 2)", 3), p("(2 3)", 3), p("(2 3)", 3), p("(1 3)", 3), p("(1 3)", 3)];
        let c = MonodromyCover::rational(3, branches.clone()).unwrap();
        let base = c.base().clone();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let constraints = crate::cover::etale_constraints(&branches);
        for _ in 0..10 {
            let t = crate::cover::random_signs(&mut rng, &base, &[], &branches, &constraints).unwrap().unwrap();
            let x = trigonal_forward(&GluedTower::smooth(t)).unwrap();
            assert_eq!(x.arithmetic_genus(), c.genus().unwrap() - 1);
        }
    }

    #[test]
    fn split_tower_gives_line_plus_curve() {
        let c = MonodromyCover::rational(3, vec![p("(1 2)", 3), p("(1 2)", 3), p("(2 3)", 3), p("(2 3)", 3)]).unwrap();
        let x = trigonal_forward(&GluedTower::smooth(SignedTower::split(&c))).unwrap();
        let mut degrees: Vec<usize> = x.cover().components().iter().map(Vec::len).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 3]);
    }

    #[test]
    fn wirtinger_input_gives_reducible_x() {
        // label 1 is unramified for C, so its three points form a trigonal fiber
        let c = closed(vec![Perm::identity(3), p("(1 2)", 3), p("(2 3)", 3), p("(1 2)", 3), p("(1 3)", 3)]);
        let t = build_boundary_example(
            BoundaryKind::Wirtinger,
            &SignedTower::split(&c),
            FiberPoint::new(0, 0),
            FiberPoint::new(0, 1),
        )
        .unwrap();
        let x = trigonal_forward(&t).unwrap();
        assert_eq!(x.nodes().len(), 1);
        assert!(x.is_connected());
        assert_eq!(x.cover().components().len(), 2);
        assert_eq!(x.arithmetic_genus(), t.downstairs().arithmetic_genus() - 1);
    }

    #[test]
    fn hyperelliptic_factoring_x_gives_reducible_c() {
        let x = closed(vec![p("(1 2)", 4), p("(1 3)(2 4)", 4), p("(3 4)", 4), p("(1 2)", 4)]);
        assert!(!crate::perm::block_systems(4, &x.generators()).is_empty());
        let c = trigonal_inverse(&x).unwrap().tower().curve();
        let mut degrees: Vec<usize> = c.components().iter().map(Vec::len).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 2]);
    }
}
