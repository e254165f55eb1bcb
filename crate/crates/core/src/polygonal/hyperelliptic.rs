//! Cartesian double covers and tetragonal curves factoring through a double cover.

use super::SheetLayout;
use crate::cover::{FiberPoint, GluedCover, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::perm::{block_action, block_systems, Perm};
use crate::weyl::{embed_2n, orientation_char};

fn require_bigonal(t: &SignedTower) -> Result<()> {
    if t.degree() != 2 {
        return Err(Error::DegreeMismatch(format!("needs a double cover of the base, got degree {}", t.degree())));
    }
    Ok(())
}

/// Whether `C~ → K` has trivial orientation character.
pub fn is_cartesian(t: &SignedTower) -> Result<bool> {
    require_bigonal(t)?;
    Ok(t.generators().iter().all(|g| orientation_char(g) == 0))
}

/// `C^0, C^1` with `C~ ≅ C^0 ×_K C^1`, read from the two halves of the
/// bigonal partner.
pub fn cartesian_factors(t: &SignedTower) -> Result<Option<(MonodromyCover, MonodromyCover)>> {
    if !is_cartesian(t)? {
        return Ok(None);
    }
    let partner = SheetLayout::new(vec![0, 3, 1, 2]).cover(t)?;
    Ok(Some((partner.restrict(&[0, 1]), partner.restrict(&[2, 3]))))
}

/// `A ×_K B` for two double covers, sheet `(i, j)` numbered `2i + j`.
pub fn fiber_product(a: &MonodromyCover, b: &MonodromyCover) -> Result<MonodromyCover> {
    if a.degree() != 2 || b.degree() != 2 {
        return Err(Error::DegreeMismatch("fiber product of double covers only".into()));
    }
    let pair = |x: &Perm, y: &Perm| {
        Perm::from_images((0..4).map(|s| 2 * x.apply(s / 2) + y.apply(s % 2)).collect()).expect("product of bijections")
    };
    let zip = |xs: &[Perm], ys: &[Perm]| xs.iter().zip(ys).map(|(x, y)| pair(x, y)).collect::<Vec<_>>();
    MonodromyCover::new(a.base().clone(), 4, zip(a.handles(), b.handles()), zip(a.branches(), b.branches()))
}

/// The double cover of `H` recording whether the monodromy of `C~` over `H`
/// is even on each fiber; `blocks` are the fibers of `C → H`.
///
/// Sheet `2h + o` carries orientation `o` over block `h`.
pub fn relative_orientation(t: &SignedTower, blocks: &[Vec<usize>]) -> Result<MonodromyCover> {
    let fibers: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut f: Vec<usize> = b.iter().flat_map(|&c| [2 * c, 2 * c + 1]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    let block_of = |x: usize| fibers.iter().position(|f| f.contains(&x)).expect("blocks cover all sheets");
    let act = |g: &crate::weyl::SignedPerm| -> Result<Perm> {
        let up = embed_2n(g);
        let mut images = vec![0; 2 * fibers.len()];
        for (h, f) in fibers.iter().enumerate() {
            let target = block_of(up.apply(f[0]));
            let pos: Vec<usize> = f
                .iter()
                .map(|&x| {
                    let y = up.apply(x);
                    fibers[target].iter().position(|&z| z == y)
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Precondition("blocks are not preserved".into()))?;
            let odd = Perm::from_images(pos)?.is_odd() as usize;
            images[2 * h] = 2 * target + odd;
            images[2 * h + 1] = 2 * target + (1 - odd);
        }
        Perm::from_images(images)
    };
    let map = |gs: &[crate::weyl::SignedPerm]| gs.iter().map(act).collect::<Result<Vec<_>>>();
    MonodromyCover::new(t.base().clone(), 2 * blocks.len(), map(t.handles())?, map(t.branches())?)
}

/// A node of `C` whose branches lie over different points of `H`: the map to
/// `H` exists only after identifying the two candidate points of `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismDefect {
    pub node: (FiberPoint, FiberPoint),
    pub candidates: (FiberPoint, FiberPoint),
}

/// A factorization `C → H → K` of a tetragonal curve through a double cover.
#[derive(Clone, Debug)]
pub struct HyperellipticFactor {
    pub blocks: Vec<Vec<usize>>,
    pub h: MonodromyCover,
    pub defects: Vec<MorphismDefect>,
}

impl HyperellipticFactor {
    /// Whether the nodes of `C` map to points of `H` without further gluing.
    pub fn is_morphism(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Every factorization of a degree-4 cover through blocks of size two.
pub fn factors_through_hyperelliptic(c: &GluedCover) -> Result<Vec<HyperellipticFactor>> {
    let cover = c.cover();
    if cover.degree() != 4 {
        return Err(Error::DegreeMismatch(format!("needs a tetragonal cover, got degree {}", cover.degree())));
    }
    let mut out = Vec::new();
    for blocks in block_systems(4, &cover.generators()) {
        if blocks[0].len() != 2 {
            continue;
        }
        let act = |ps: &[Perm]| ps.iter().map(|p| block_action(p, &blocks)).collect::<Vec<_>>();
        let h = MonodromyCover::new(cover.base().clone(), 2, act(cover.handles()), act(cover.branches()))?;
        let image = |p: FiberPoint| {
            let sheet = cover.fiber(p.label)[p.cycle][0];
            let b = blocks.iter().position(|bl| bl.contains(&sheet)).expect("block partition");
            h.point_of_sheet(p.label, b)
        };
        let defects = c
            .nodes()
            .iter()
            .filter_map(|&(a, b)| {
                let (ia, ib) = (image(a), image(b));
                (ia != ib).then_some(MorphismDefect { node: (a, b), candidates: (ia, ib) })
            })
            .collect();
        out.push(HyperellipticFactor { blocks, h, defects });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::covers_isomorphic;
    use crate::perm::product;
    use crate::weyl::{sp_product, SignedPerm};

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    fn sp(s: &str, eps: u64) -> SignedPerm {
        SignedPerm::new(p(s, 2), eps).unwrap()
    }

    #[test]
    fn hyperelliptic_towers_are_cartesian() {
        let gs = vec![sp("(1 2)", 0), sp("(1 2)", 0b11), sp("(1 2)", 0), sp("()", 0b11), sp("(1 2)", 0b11)];
        let mut all = gs.clone();
        all.push(sp_product(2, gs.iter()).inverse());
        let t = SignedTower::rational(2, all).unwrap();
        assert!(is_cartesian(&t).unwrap());
        let (a, b) = cartesian_factors(&t).unwrap().unwrap();
        assert!(covers_isomorphic(&fiber_product(&a, &b).unwrap(), &t.lift()));
    }

    #[test]
    fn odd_sign_pair_is_not_cartesian() {
        let t = SignedTower::rational(2, vec![sp("()", 0b01), sp("()", 0b01)]).unwrap();
        assert!(!is_cartesian(&t).unwrap());
        assert!(cartesian_factors(&t).unwrap().is_none());
    }

    #[test]
    fn dihedral_monodromy_factors_and_s4_does_not() {
        let mut gs = vec![p("(1 2)", 4), p("(1 3)(2 4)", 4), p("(3 4)", 4)];
        gs.push(product(4, gs.iter()).inverse());
        let c = GluedCover::smooth(MonodromyCover::rational(4, gs).unwrap());
        let f = factors_through_hyperelliptic(&c).unwrap();
        assert!(f.iter().any(|x| x.blocks == vec![vec![0, 1], vec![2, 3]]));
        let mut gs = vec![p("(1 2)", 4), p("(1 2 3 4)", 4)];
        gs.push(product(4, gs.iter()).inverse());
        let s4 = GluedCover::smooth(MonodromyCover::rational(4, gs).unwrap());
        assert!(factors_through_hyperelliptic(&s4).unwrap().is_empty());
    }

    #[test]
    fn node_across_blocks_is_a_defect() {
        let gs = vec![p("(1 2)(3 4)", 4), p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4), p("(1 3)(2 4)", 4)];
        let cover = MonodromyCover::rational(4, gs).unwrap();
        let node = (FiberPoint::new(2, 0), FiberPoint::new(2, 1));
        let c = GluedCover::new(cover, vec![node]).unwrap();
        let f = factors_through_hyperelliptic(&c).unwrap();
        let pair = f.iter().find(|x| x.blocks == vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(pair.is_morphism());
        let other = f.iter().find(|x| x.blocks == vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(other.defects.len(), 1);
    }
}
