//! Branched covers of a base curve as monodromy tuples, double covers over
//! them as tuples of signed permutations, and their nodal decorations.
//!
//! The base has `2h` handle generators `α_1, β_1, …` and one generator per
//! branch label; every tuple satisfies `Π[α_i, β_i] · Π σ_b = 1`, read left to
//! right with the rightmost factor acting first. A point of the cover over a
//! branch label is a cycle of the local permutation, numbered in the order of
//! [`Perm::cycles`].

mod file;
mod nodal;
mod signs;

pub use file::{parse_tower_file, write_cover, write_tower, Loaded, TowerFile};
pub use nodal::{
    build_boundary_example, glued_covers_isomorphic, glued_towers_isomorphic, Allowability, BoundaryKind,
    DegenerationType, GluedCover, GluedTower, InvolutionReport,
};
pub use signs::{etale_constraints, random_signs, sign_solutions, SignConstraint};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::find_symmetric_conjugator;
use crate::perm::{commutator, orbits, product, Perm};
use crate::weyl::{embed_2n, global_flip, sp_commutator, sp_product, SignedPerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseCurve {
    genus: usize,
    labels: Vec<String>,
}

impl BaseCurve {
    pub fn new(genus: usize, labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("bad branch label {l:?}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Parse(format!("branch label {l} repeated")));
            }
        }
        Ok(BaseCurve { genus, labels })
    }

    /// Base of genus `h` with labels `b1, …, bk`.
    pub fn numbered(genus: usize, k: usize) -> Self {
        BaseCurve { genus, labels: (1..=k).map(|i| format!("b{i}")).collect() }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }
}

/// A point over a branch label: the label index and the cycle index there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberPoint {
    pub label: usize,
    pub cycle: usize,
}

impl FiberPoint {
    pub fn new(label: usize, cycle: usize) -> Self {
        FiberPoint { label, cycle }
    }
}

/// `Π[α_i, β_i] · Π σ_b`.
pub fn relation_residual(n: usize, handles: &[Perm], branches: &[Perm]) -> Perm {
    let comms: Vec<Perm> = handles.chunks(2).map(|ab| commutator(&ab[0], &ab[1])).collect();
    product(n, comms.iter().chain(branches))
}

/// Signed analogue of [`relation_residual`].
pub fn signed_relation_residual(n: usize, handles: &[SignedPerm], branches: &[SignedPerm]) -> SignedPerm {
    let comms: Vec<SignedPerm> = handles.chunks(2).map(|ab| sp_commutator(&ab[0], &ab[1])).collect();
    sp_product(n, comms.iter().chain(branches))
}

fn check_shape(base: &BaseCurve, handles: usize, branches: usize) -> Result<()> {
    if handles != 2 * base.genus {
        return Err(Error::DegreeMismatch(format!("{handles} handle generators for base genus {}", base.genus)));
    }
    if branches != base.labels.len() {
        return Err(Error::DegreeMismatch(format!("{branches} branch generators for {} labels", base.labels.len())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyCover {
    base: BaseCurve,
    degree: usize,
    handles: Vec<Perm>,
    branches: Vec<Perm>,
}

impl MonodromyCover {
    pub fn new(base: BaseCurve, degree: usize, handles: Vec<Perm>, branches: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegreeMismatch("degree 0 cover".into()));
        }
        check_shape(&base, handles.len(), branches.len())?;
        if let Some(p) = handles.iter().chain(&branches).find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch(format!(
                "permutation of degree {} in a degree-{degree} cover",
                p.degree()
            )));
        }
        let residual = relation_residual(degree, &handles, &branches);
        if !residual.is_identity() {
            return Err(Error::ProductRelation(residual.to_string()));
        }
        Ok(MonodromyCover { base, degree, handles, branches })
    }

    /// Cover of a rational base with labels `b1, …, bk`.
    pub fn rational(degree: usize, branches: Vec<Perm>) -> Result<Self> {
        MonodromyCover::new(BaseCurve::numbered(0, branches.len()), degree, Vec::new(), branches)
    }

    pub fn base(&self) -> &BaseCurve {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn handles(&self) -> &[Perm] {
        &self.handles
    }

    pub fn branches(&self) -> &[Perm] {
        &self.branches
    }

    /// Handle generators followed by branch generators.
    pub fn generators(&self) -> Vec<Perm> {
        self.handles.iter().chain(&self.branches).cloned().collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Index of the component containing each sheet.
    pub fn component_of_sheet(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree];
        for (k, comp) in self.components().iter().enumerate() {
            for &x in comp {
                out[x] = k;
            }
        }
        out
    }

    /// Genus of each component, from Riemann–Hurwitz on that component.
    pub fn component_genera(&self) -> Vec<i64> {
        let h = self.base.genus as i64;
        let comp = self.component_of_sheet();
        let comps = self.components();
        let mut ram = vec![0i64; comps.len()];
        for b in &self.branches {
            for cyc in b.cycles() {
                ram[comp[cyc[0]]] += cyc.len() as i64 - 1;
            }
        }
        comps
            .iter()
            .zip(&ram)
            .map(|(c, r)| {
                debug_assert!(r % 2 == 0, "ramification parity");
                1 + c.len() as i64 * (h - 1) + r / 2
            })
            .collect()
    }

    /// Genus of a connected cover.
    pub fn genus(&self) -> Result<i64> {
        let g = self.component_genera();
        if g.len() != 1 {
            return Err(Error::Precondition(format!("cover has {} components", g.len())));
        }
        Ok(g[0])
    }

    /// Points over branch label `label`.
    pub fn fiber(&self, label: usize) -> Vec<Vec<usize>> {
        self.branches[label].cycles()
    }

    pub fn fiber_point_exists(&self, p: FiberPoint) -> bool {
        p.label < self.branches.len() && p.cycle < self.fiber(p.label).len()
    }

    /// The point over `label` through `sheet`.
    pub fn point_of_sheet(&self, label: usize, sheet: usize) -> FiberPoint {
        FiberPoint::new(label, self.branches[label].cycle_index()[sheet])
    }

    /// Ramification index minus one at `p`.
    pub fn ramification_at(&self, p: FiberPoint) -> usize {
        self.fiber(p.label)[p.cycle].len() - 1
    }

    /// The cover restricted to one component, sheets renumbered in increasing order.
    pub fn restrict(&self, component: &[usize]) -> MonodromyCover {
        let mut sorted = component.to_vec();
        sorted.sort_unstable();
        let mut pos = vec![usize::MAX; self.degree];
        for (k, &x) in sorted.iter().enumerate() {
            pos[x] = k;
        }
        let restrict_one = |p: &Perm| {
            Perm::from_images(sorted.iter().map(|&x| pos[p.apply(x)]).collect()).expect("components are invariant")
        };
        MonodromyCover {
            base: self.base.clone(),
            degree: sorted.len(),
            handles: self.handles.iter().map(restrict_one).collect(),
            branches: self.branches.iter().map(restrict_one).collect(),
        }
    }

    /// The cover obtained by relabeling sheets through `c`.
    pub fn conjugate_by(&self, c: &Perm) -> MonodromyCover {
        MonodromyCover {
            base: self.base.clone(),
            degree: self.degree,
            handles: self.handles.iter().map(|p| p.conjugate_by(c)).collect(),
            branches: self.branches.iter().map(|p| p.conjugate_by(c)).collect(),
        }
    }
}

/// A sheet relabeling carrying `a` to `b`, if one exists.
pub fn cover_isomorphism(a: &MonodromyCover, b: &MonodromyCover) -> Option<Perm> {
    if a.degree != b.degree || a.base.genus != b.base.genus || a.branches.len() != b.branches.len() {
        return None;
    }
    find_symmetric_conjugator(a.degree, &a.generators(), &b.generators(), |_| true)
}

pub fn covers_isomorphic(a: &MonodromyCover, b: &MonodromyCover) -> bool {
    cover_isomorphism(a, b).is_some()
}

/// A double cover `C~ → C` over a cover `C → K`, given by signed monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTower {
    base: BaseCurve,
    degree: usize,
    handles: Vec<SignedPerm>,
    branches: Vec<SignedPerm>,
}

impl SignedTower {
    pub fn new(base: BaseCurve, degree: usize, handles: Vec<SignedPerm>, branches: Vec<SignedPerm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegreeMismatch("degree 0 tower".into()));
        }
        check_shape(&base, handles.len(), branches.len())?;
        if let Some(g) = handles.iter().chain(&branches).find(|g| g.n() != degree) {
            return Err(Error::DegreeMismatch(format!(
                "signed permutation on {} letters in a degree-{degree} tower",
                g.n()
            )));
        }
        let residual = signed_relation_residual(degree, &handles, &branches);
        if !residual.is_identity() {
            return Err(Error::ProductRelation(residual.to_string()));
        }
        Ok(SignedTower { base, degree, handles, branches })
    }

    pub fn rational(degree: usize, branches: Vec<SignedPerm>) -> Result<Self> {
        SignedTower::new(BaseCurve::numbered(0, branches.len()), degree, Vec::new(), branches)
    }

    /// The tower with all signs zero over `c`: two disjoint copies of `C`.
    pub fn split(c: &MonodromyCover) -> Self {
        SignedTower {
            base: c.base.clone(),
            degree: c.degree,
            handles: c.handles.iter().cloned().map(SignedPerm::unsigned).collect(),
            branches: c.branches.iter().cloned().map(SignedPerm::unsigned).collect(),
        }
    }

    pub fn base(&self) -> &BaseCurve {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn handles(&self) -> &[SignedPerm] {
        &self.handles
    }

    pub fn branches(&self) -> &[SignedPerm] {
        &self.branches
    }

    pub fn generators(&self) -> Vec<SignedPerm> {
        self.handles.iter().chain(&self.branches).cloned().collect()
    }

    /// The middle curve `C`.
    pub fn curve(&self) -> MonodromyCover {
        MonodromyCover {
            base: self.base.clone(),
            degree: self.degree,
            handles: self.handles.iter().map(|g| g.sigma().clone()).collect(),
            branches: self.branches.iter().map(|g| g.sigma().clone()).collect(),
        }
    }

    /// The top curve `C~` as a `2n`-sheeted cover of the base.
    pub fn lift(&self) -> MonodromyCover {
        MonodromyCover {
            base: self.base.clone(),
            degree: 2 * self.degree,
            handles: self.handles.iter().map(embed_2n).collect(),
            branches: self.branches.iter().map(embed_2n).collect(),
        }
    }

    /// The involution of `C~` over `C` on the `2n` sheets.
    pub fn iota(&self) -> Perm {
        global_flip(self.degree)
    }

    /// Whether every point of `C` has two preimages in `C~`.
    pub fn is_etale_double(&self) -> bool {
        self.branches.iter().all(|g| g.sigma().cycles().iter().all(|c| g.cycle_sign(c) == 0))
    }

    /// Points of `C` over which `C~ → C` is branched.
    pub fn ramified_points(&self) -> Vec<FiberPoint> {
        let mut out = Vec::new();
        for (label, g) in self.branches.iter().enumerate() {
            for (k, c) in g.sigma().cycles().iter().enumerate() {
                if g.cycle_sign(c) == 1 {
                    out.push(FiberPoint::new(label, k));
                }
            }
        }
        out
    }

    /// Image in `C` of a point of `C~`.
    pub fn project(&self, p: FiberPoint) -> FiberPoint {
        let up = embed_2n(&self.branches[p.label]).cycles();
        let sheet = up[p.cycle][0] / 2;
        FiberPoint::new(p.label, self.branches[p.label].sigma().cycle_index()[sheet])
    }

    /// Points of `C~` over a point of `C`: the one through sheet `2·min + s`
    /// for `s = 0, 1`, a single point when branched.
    pub fn lifts(&self, p: FiberPoint) -> Vec<FiberPoint> {
        let g = &self.branches[p.label];
        let m = g.sigma().cycles()[p.cycle][0];
        let idx = embed_2n(g).cycle_index();
        let a = FiberPoint::new(p.label, idx[2 * m]);
        let b = FiberPoint::new(p.label, idx[2 * m + 1]);
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }

    /// Image of a point of `C~` under `ι`.
    pub fn iota_point(&self, p: FiberPoint) -> FiberPoint {
        let up = embed_2n(&self.branches[p.label]);
        let x = up.cycles()[p.cycle][0];
        FiberPoint::new(p.label, up.cycle_index()[x ^ 1])
    }

    /// The tower over an invariant set of sheets of `C`, renumbered in increasing order.
    pub fn restrict(&self, component: &[usize]) -> SignedTower {
        let mut sorted = component.to_vec();
        sorted.sort_unstable();
        let mut pos = vec![usize::MAX; self.degree];
        for (k, &x) in sorted.iter().enumerate() {
            pos[x] = k;
        }
        let restrict_one = |g: &SignedPerm| {
            let sigma = Perm::from_images(sorted.iter().map(|&x| pos[g.sigma().apply(x)]).collect())
                .expect("components are invariant");
            let eps = sorted.iter().enumerate().fold(0u64, |m, (k, &x)| m | (u64::from(g.eps_at(x)) << k));
            SignedPerm::new(sigma, eps).expect("restricted signs fit")
        };
        SignedTower {
            base: self.base.clone(),
            degree: sorted.len(),
            handles: self.handles.iter().map(restrict_one).collect(),
            branches: self.branches.iter().map(restrict_one).collect(),
        }
    }

    /// The tower obtained by relabeling sheets through a signed permutation.
    pub fn conjugate_by(&self, c: &SignedPerm) -> SignedTower {
        SignedTower {
            base: self.base.clone(),
            degree: self.degree,
            handles: self.handles.iter().map(|g| g.conjugate_by(c)).collect(),
            branches: self.branches.iter().map(|g| g.conjugate_by(c)).collect(),
        }
    }
}

/// A signed relabeling, embedded on `2n` points, carrying `a` to `b`.
pub fn tower_isomorphism(a: &SignedTower, b: &SignedTower) -> Result<Option<Perm>> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(format!("towers of degree {} and {}", a.degree, b.degree)));
    }
    if a.base.genus != b.base.genus || a.branches.len() != b.branches.len() {
        return Err(Error::DegreeMismatch("towers over different bases".into()));
    }
    Ok(find_tower_conjugator(a, b, |_| true))
}

pub(crate) fn find_tower_conjugator<F>(a: &SignedTower, b: &SignedTower, accept: F) -> Option<Perm>
where
    F: FnMut(&Perm) -> bool,
{
    let mut ga: Vec<Perm> = a.generators().iter().map(embed_2n).collect();
    let mut gb: Vec<Perm> = b.generators().iter().map(embed_2n).collect();
    ga.push(a.iota());
    gb.push(b.iota());
    find_symmetric_conjugator(2 * a.degree, &ga, &gb, accept)
}

/// Whether the two towers differ by a relabeling in `WC_n`.
pub fn towers_isomorphic(a: &SignedTower, b: &SignedTower) -> Result<bool> {
    Ok(tower_isomorphism(a, b)?.is_some())
}
