//! Seeded random instances for the verification suites.
//!
//! Permutations are uniform in `S_n` and signs uniform in `{0,1}^n`; the last
//! branch element is the inverse of the product of the others, so the product
//! relation holds by construction. Where étale or prescribed ramification is
//! required, signs are uniform among the solutions of the sign equations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::{
    etale_constraints, random_signs, BaseCurve, FiberPoint, GluedTower, MonodromyCover, SignConstraint, SignedTower,
};
use crate::error::Result;
use crate::perm::{is_transitive, product, Perm};
use crate::weyl::{sp_commutator, sp_product, SignedPerm};

pub fn random_perm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle is a bijection")
}

pub fn random_signed<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SignedPerm {
    let eps = rng.gen_range(0..1u64 << n);
    SignedPerm::new(random_perm(rng, n), eps).expect("n-bit signs")
}

/// A cover of `P^1` with `labels` branch labels.
pub fn random_rational_cover<R: Rng + ?Sized>(rng: &mut R, n: usize, labels: usize, connected: bool) -> MonodromyCover {
    loop {
        let mut branches: Vec<Perm> = (0..labels - 1).map(|_| random_perm(rng, n)).collect();
        branches.push(product(n, branches.iter()).inverse());
        if !connected || is_transitive(n, &branches) {
            return MonodromyCover::rational(n, branches).expect("closed by the last factor");
        }
    }
}

/// A connected cover of `P^1` whose monodromy group has the given order.
pub fn random_cover_with_group<R: Rng + ?Sized>(rng: &mut R, n: usize, labels: usize, order: u128) -> MonodromyCover {
    loop {
        let c = random_rational_cover(rng, n, labels, true);
        if crate::group::group_order(n, &c.generators()).ok() == Some(order) {
            return c;
        }
    }
}

/// A connected cover of `P^1` with a uniform étale double cover on top.
pub fn random_etale_tower<R: Rng + ?Sized>(rng: &mut R, n: usize, labels: usize) -> SignedTower {
    let c = random_rational_cover(rng, n, labels, true);
    random_signs(rng, c.base(), &[], c.branches(), &etale_constraints(c.branches()))
        .expect("sign equations on a valid cover")
        .expect("the zero signs are étale")
}

/// A tower of the given degree over a base of genus `genus`, uniform in `WC_n`.
pub fn random_signed_tower<R: Rng + ?Sized>(rng: &mut R, n: usize, genus: usize, labels: usize) -> SignedTower {
    let handles: Vec<SignedPerm> = (0..2 * genus).map(|_| random_signed(rng, n)).collect();
    let mut branches: Vec<SignedPerm> = (0..labels - 1).map(|_| random_signed(rng, n)).collect();
    let comms: Vec<SignedPerm> = handles.chunks(2).map(|ab| sp_commutator(&ab[0], &ab[1])).collect();
    let prefix = sp_product(n, comms.iter().chain(&branches));
    branches.push(prefix.inverse());
    SignedTower::new(BaseCurve::numbered(genus, labels), n, handles, branches).expect("closed by the last factor")
}

/// A degree-2 tower over a base of genus `genus`, glued at a random subset of
/// the fibers branched at both points.
pub fn random_bigonal_instance<R: Rng + ?Sized>(rng: &mut R, genus: usize, labels: usize) -> GluedTower {
    let t = random_signed_tower(rng, 2, genus, labels);
    let nodes = t
        .branches()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.sigma().is_identity() && g.eps() == 0b11)
        .filter(|_| rng.gen::<bool>())
        .map(|(k, _)| (FiberPoint::new(k, 0), FiberPoint::new(k, 1)))
        .collect();
    GluedTower::new(t, nodes).expect("each glued fiber is stable under the flip")
}

/// A connected cover of `P^1` with a double cover branched exactly over two
/// distinct points of `C`, returned with those points.
pub fn random_two_point_branched<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    labels: usize,
) -> (SignedTower, FiberPoint, FiberPoint) {
    loop {
        let c = random_rational_cover(rng, n, labels, true);
        let points: Vec<FiberPoint> =
            (0..labels).flat_map(|k| (0..c.fiber(k).len()).map(move |i| FiberPoint::new(k, i))).collect();
        let chosen: Vec<FiberPoint> = points.choose_multiple(rng, 2).copied().collect();
        let constraints: Vec<SignConstraint> =
            points.iter().map(|&point| SignConstraint { point, ramified: chosen.contains(&point) }).collect();
        if let Ok(Some(t)) = random_signs(rng, c.base(), &[], c.branches(), &constraints) {
            return (t, chosen[0], chosen[1]);
        }
    }
}

/// A connected degree-4 tower over `P^1` in which `C~` is ramified at exactly
/// two points over each of `glued` random labels and unramified elsewhere,
/// with the two ramification points over each such label glued.
pub fn random_tetragonal_instance<R: Rng + ?Sized>(rng: &mut R, labels: usize, glued: usize) -> GluedTower {
    loop {
        let c = random_rational_cover(rng, 4, labels, true);
        let mut chosen: Vec<usize> = (0..labels).filter(|&k| c.fiber(k).len() >= 2).collect();
        if chosen.len() < glued {
            continue;
        }
        chosen.shuffle(rng);
        chosen.truncate(glued);
        let mut pairs = Vec::new();
        let mut constraints = Vec::new();
        for k in 0..labels {
            let points: Vec<FiberPoint> = (0..c.fiber(k).len()).map(|i| FiberPoint::new(k, i)).collect();
            let ramified: Vec<FiberPoint> =
                if chosen.contains(&k) { points.choose_multiple(rng, 2).copied().collect() } else { Vec::new() };
            if let [p, q] = ramified[..] {
                pairs.push((p, q));
            }
            constraints
                .extend(points.iter().map(|&point| SignConstraint { point, ramified: ramified.contains(&point) }));
        }
        let Ok(Some(t)) = random_signs(rng, c.base(), &[], c.branches(), &constraints) else { continue };
        let nodes = pairs.iter().map(|&(p, q)| (t.lifts(p)[0], t.lifts(q)[0])).collect();
        return GluedTower::new(t, nodes).expect("ramification points are fixed by the involution");
    }
}

/// A double cover `H → P^1` with `swaps` branch labels among `labels`.
fn random_hyperelliptic<R: Rng + ?Sized>(rng: &mut R, swaps: usize, labels: usize) -> Vec<Perm> {
    let mut flags: Vec<bool> = (0..labels).map(|k| k < swaps).collect();
    flags.shuffle(rng);
    flags.into_iter().map(|f| if f { Perm::transposition(2, 0, 1) } else { Perm::identity(2) }).collect()
}

/// A Cartesian tower `C~ = C^0 ×_H C^1 → C → H → P^1`.
#[derive(Clone, Debug)]
pub struct CartesianInstance {
    pub h: MonodromyCover,
    /// `C^0 → H → P^1` and `C^1 → H → P^1`.
    pub factors: (SignedTower, SignedTower),
    /// The degree-4 tower, sheet `2h + c` of `C` over sheet `h` of `H`.
    pub tower: SignedTower,
}

impl CartesianInstance {
    /// Fibers of `C → H`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        vec![vec![0, 1], vec![2, 3]]
    }
}

/// Combines two double covers of `H` with disjoint branching into the
/// degree-4 tower of their fiber product.
pub fn cartesian_tower(a: &SignedTower, b: &SignedTower) -> Result<SignedTower> {
    let lift = |x: &SignedPerm, y: &SignedPerm| {
        let sigma = Perm::from_images(
            (0..4)
                .map(|s| 2 * x.sigma().apply(s / 2) + ((s % 2) ^ usize::from(x.eps_at(s / 2) ^ y.eps_at(s / 2))))
                .collect(),
        )
        .expect("bijection on sheets of C");
        let eps = (0..4).fold(0u64, |m, s| m | (u64::from(x.eps_at(s / 2)) << s));
        SignedPerm::new(sigma, eps).expect("four signs")
    };
    let zip = |xs: &[SignedPerm], ys: &[SignedPerm]| xs.iter().zip(ys).map(|(x, y)| lift(x, y)).collect::<Vec<_>>();
    SignedTower::new(a.base().clone(), 4, zip(a.handles(), b.handles()), zip(a.branches(), b.branches()))
}

/// Points of `h` over its swap labels, where a generic double cover of `h`
/// is unbranched.
fn swap_points(h: &MonodromyCover) -> Vec<SignConstraint> {
    (0..h.branches().len())
        .filter(|&k| !h.branches()[k].is_identity())
        .flat_map(|k| {
            (0..h.fiber(k).len()).map(move |i| SignConstraint { point: FiberPoint::new(k, i), ramified: false })
        })
        .collect()
}

/// Whether every label carries at most one branch point of the given towers.
fn generic_branching(towers: &[&SignedTower]) -> bool {
    let mut labels: Vec<usize> = towers.iter().flat_map(|t| t.ramified_points()).map(|p| p.label).collect();
    let total = labels.len();
    labels.sort_unstable();
    labels.dedup();
    labels.len() == total
}

/// A Cartesian tower over a hyperelliptic `H` of genus `(swaps - 2) / 2` with
/// connected `C`, `C^0` and `C^1`, both `C^i → H` branched. The branch points of `C^0 → H` and
/// `C^1 → H` lie over distinct labels, away from the branch points of `H`.
///
/// Panics unless `labels >= swaps + 4`; fewer free labels cannot carry two
/// branched double covers with generic branching.
pub fn random_cartesian_bihyperelliptic<R: Rng + ?Sized>(
    rng: &mut R,
    swaps: usize,
    labels: usize,
) -> CartesianInstance {
    assert!(labels >= swaps + 4, "need at least four labels away from the branch points of H");
    loop {
        let hb = random_hyperelliptic(rng, swaps, labels);
        let h = MonodromyCover::rational(2, hb.clone()).expect("even number of swaps");
        let base = h.base().clone();
        let Ok(Some(a)) = random_signs(rng, &base, &[], &hb, &swap_points(&h)) else { continue };
        let mut avoid = swap_points(&h);
        for p in a.ramified_points() {
            avoid.extend(
                (0..h.fiber(p.label).len())
                    .map(|i| SignConstraint { point: FiberPoint::new(p.label, i), ramified: false }),
            );
        }
        let Ok(Some(b)) = random_signs(rng, &base, &[], &hb, &avoid) else { continue };
        if a.is_etale_double() || b.is_etale_double() || !generic_branching(&[&a, &b]) {
            continue;
        }
        let Ok(tower) = cartesian_tower(&a, &b) else { continue };
        if a.lift().is_connected() && b.lift().is_connected() && tower.curve().is_connected() {
            return CartesianInstance { h, factors: (a, b), tower };
        }
    }
}

/// A bielliptic `C → E → P^1` with an étale double cover that is not
/// Cartesian over `E`; `C → E` is branched, over distinct labels, away from
/// the branch points of `E`.
#[derive(Clone, Debug)]
pub struct BiellipticInstance {
    pub e: MonodromyCover,
    pub tower: SignedTower,
}

pub fn random_noncartesian_bielliptic<R: Rng + ?Sized>(rng: &mut R, labels: usize) -> BiellipticInstance {
    loop {
        let eb = random_hyperelliptic(rng, 4, labels);
        let e = MonodromyCover::rational(2, eb.clone()).expect("four swaps");
        let Ok(Some(gamma)) = random_signs(rng, e.base(), &[], &eb, &swap_points(&e)) else { continue };
        let c = gamma.lift();
        if gamma.is_etale_double() || !c.is_connected() || !generic_branching(&[&gamma]) {
            continue;
        }
        // sheets 2h, 2h + 1 of C lie over sheet h of E
        let Ok(Some(tower)) = random_signs(rng, c.base(), &[], c.branches(), &etale_constraints(c.branches())) else {
            continue;
        };
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let Ok(orientation) = crate::polygonal::relative_orientation(&tower, &blocks) else { continue };
        if orientation.components().len() < 2 * e.components().len() {
            return BiellipticInstance { e, tower };
        }
    }
}
