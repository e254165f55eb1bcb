//! Nodal curves obtained by gluing pairs of points of a cover, nodal towers,
//! Beauville allowability and the boundary types of one-node towers.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{find_tower_conjugator, FiberPoint, MonodromyCover, SignedTower};
use crate::error::{Error, Result};
use crate::group::find_symmetric_conjugator;
use crate::perm::{Perm, UnionFind};

fn check_pairs(cover: &MonodromyCover, nodes: &[(FiberPoint, FiberPoint)]) -> Result<()> {
    let mut seen = HashSet::new();
    for &(a, b) in nodes {
        for x in [a, b] {
            if !cover.fiber_point_exists(x) {
                return Err(Error::Precondition(format!("no point {} over label {}", x.cycle + 1, x.label + 1)));
            }
            if !seen.insert(x) {
                return Err(Error::Precondition(format!(
                    "point {} over label {} glued twice",
                    x.cycle + 1,
                    x.label + 1
                )));
            }
        }
    }
    Ok(())
}

fn normalize(a: FiberPoint, b: FiberPoint) -> (FiberPoint, FiberPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A cover with pairs of points identified to nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedCover {
    cover: MonodromyCover,
    nodes: Vec<(FiberPoint, FiberPoint)>,
}

impl GluedCover {
    pub fn new(cover: MonodromyCover, nodes: Vec<(FiberPoint, FiberPoint)>) -> Result<Self> {
        check_pairs(&cover, &nodes)?;
        let mut nodes: Vec<_> = nodes.into_iter().map(|(a, b)| normalize(a, b)).collect();
        nodes.sort_unstable();
        Ok(GluedCover { cover, nodes })
    }

    pub fn smooth(cover: MonodromyCover) -> Self {
        GluedCover { cover, nodes: Vec::new() }
    }

    pub fn cover(&self) -> &MonodromyCover {
        &self.cover
    }

    pub fn nodes(&self) -> &[(FiberPoint, FiberPoint)] {
        &self.nodes
    }

    /// Component of the normalization carrying a point.
    pub fn component_of(&self, p: FiberPoint) -> usize {
        let sheet = self.cover.fiber(p.label)[p.cycle][0];
        self.cover.component_of_sheet()[sheet]
    }

    /// Number of connected components after gluing.
    pub fn connected_components(&self) -> usize {
        let k = self.cover.components().len();
        let mut uf = UnionFind::new(k);
        for &(a, b) in &self.nodes {
            uf.union(self.component_of(a), self.component_of(b));
        }
        (0..k).map(|i| uf.find(i)).collect::<HashSet<_>>().len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() == 1
    }

    /// `Σ g_i + #nodes - #components + 1` over the normalization.
    pub fn arithmetic_genus(&self) -> i64 {
        let genera = self.cover.component_genera();
        genera.iter().sum::<i64>() + self.nodes.len() as i64 - genera.len() as i64 + 1
    }
}

/// The boundary type of a one-node double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegenerationType {
    Smooth,
    /// Split over the normalization, glued crosswise.
    BoundaryI,
    /// Unramified at the node, not of type I.
    BoundaryII,
    /// Branched at both branches of the node.
    BoundaryIII,
}

impl fmt::Display for DegenerationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenerationType::Smooth => "smooth",
            DegenerationType::BoundaryI => "∂I",
            DegenerationType::BoundaryII => "∂II",
            DegenerationType::BoundaryIII => "∂III",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allowability {
    pub allowable: bool,
    pub reason: String,
}

/// The involution of `C~` and, for every point of `C~` over every label,
/// whether it is fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionReport {
    pub iota: Perm,
    pub points: Vec<(FiberPoint, bool)>,
}

impl InvolutionReport {
    pub fn fixed(&self) -> Vec<FiberPoint> {
        self.points.iter().filter(|(_, f)| *f).map(|(p, _)| *p).collect()
    }
}

/// A tower whose top curve has pairs of points glued; the gluing is
/// `ι`-stable and descends to the nodes of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedTower {
    tower: SignedTower,
    nodes: Vec<(FiberPoint, FiberPoint)>,
}

impl GluedTower {
    /// `nodes` are pairs of points of `C~`.
    pub fn new(tower: SignedTower, nodes: Vec<(FiberPoint, FiberPoint)>) -> Result<Self> {
        check_pairs(&tower.lift(), &nodes)?;
        let mut nodes: Vec<_> = nodes.into_iter().map(|(a, b)| normalize(a, b)).collect();
        nodes.sort_unstable();
        let set: BTreeSet<_> = nodes.iter().copied().collect();
        for &(a, b) in &nodes {
            let image = normalize(tower.iota_point(a), tower.iota_point(b));
            if !set.contains(&image) {
                return Err(Error::Precondition(format!(
                    "gluing not stable under the involution: label {} point {} with label {} point {}",
                    a.label + 1,
                    a.cycle + 1,
                    b.label + 1,
                    b.cycle + 1
                )));
            }
        }
        Ok(GluedTower { tower, nodes })
    }

    pub fn smooth(tower: SignedTower) -> Self {
        GluedTower { tower, nodes: Vec::new() }
    }

    pub fn tower(&self) -> &SignedTower {
        &self.tower
    }

    /// Nodes of `C~` as pairs of its points.
    pub fn nodes(&self) -> &[(FiberPoint, FiberPoint)] {
        &self.nodes
    }

    /// `C~` with its nodes.
    pub fn upstairs(&self) -> GluedCover {
        GluedCover { cover: self.tower.lift(), nodes: self.nodes.clone() }
    }

    /// Nodes of `C`: images of the nodes of `C~` whose branches stay apart.
    pub fn downstairs_nodes(&self) -> Vec<(FiberPoint, FiberPoint)> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.nodes {
            let (pa, pb) = (self.tower.project(a), self.tower.project(b));
            if pa != pb {
                out.insert(normalize(pa, pb));
            }
        }
        out.into_iter().collect()
    }

    /// `C` with its nodes.
    pub fn downstairs(&self) -> GluedCover {
        GluedCover { cover: self.tower.curve(), nodes: self.downstairs_nodes() }
    }

    pub fn involution_report(&self) -> InvolutionReport {
        let lift = self.tower.lift();
        let mut points = Vec::new();
        for label in 0..lift.branches().len() {
            for cycle in 0..lift.fiber(label).len() {
                let p = FiberPoint::new(label, cycle);
                points.push((p, self.tower.iota_point(p) == p));
            }
        }
        InvolutionReport { iota: self.tower.iota(), points }
    }

    /// Beauville's condition: the fixed points of `ι` are nodes whose branches
    /// are not exchanged, and as many nodes as components are moved by `ι`.
    pub fn is_allowable(&self) -> Allowability {
        let glued: HashSet<FiberPoint> = self.nodes.iter().flat_map(|&(a, b)| [a, b]).collect();
        for p in self.involution_report().fixed() {
            if !glued.contains(&p) {
                return Allowability {
                    allowable: false,
                    reason: format!("smooth fixed point {} over label {}", p.cycle + 1, p.label + 1),
                };
            }
        }
        let mut moved_nodes = 0;
        for &(a, b) in &self.nodes {
            let (ia, ib) = (self.tower.iota_point(a), self.tower.iota_point(b));
            if ia == b {
                return Allowability {
                    allowable: false,
                    reason: format!("branches exchanged at the node over label {}", a.label + 1),
                };
            }
            if normalize(ia, ib) != (a, b) {
                moved_nodes += 1;
            }
        }
        let lift = self.tower.lift();
        let iota = self.tower.iota();
        let comp = lift.component_of_sheet();
        let moved_components = lift.components().iter().filter(|c| comp[iota.apply(c[0])] != comp[c[0]]).count();
        if moved_nodes != moved_components {
            return Allowability {
                allowable: false,
                reason: format!("{moved_nodes} nodes but {moved_components} components exchanged"),
            };
        }
        Allowability {
            allowable: true,
            reason: format!("{moved_nodes} nodes and {moved_components} components exchanged"),
        }
    }

    /// Boundary type at each node of `C`.
    pub fn node_types(&self) -> Vec<DegenerationType> {
        let curve = self.tower.curve();
        let lift = self.tower.lift();
        let comp_c = curve.component_of_sheet();
        let comp_up = lift.component_of_sheet();
        let sizes_c: Vec<usize> = curve.components().iter().map(Vec::len).collect();
        let sizes_up: Vec<usize> = lift.components().iter().map(Vec::len).collect();
        let mut out = Vec::new();
        for (p, q) in self.downstairs_nodes() {
            let up = self.tower.lifts(p);
            if up.len() == 1 {
                out.push(DegenerationType::BoundaryIII);
                continue;
            }
            let partner = self
                .nodes
                .iter()
                .find_map(|&(a, b)| {
                    if a == up[0] {
                        Some(b)
                    } else if b == up[0] {
                        Some(a)
                    } else {
                        None
                    }
                })
                .expect("node of C lifts to a node of C~");
            let sheet = |c: &MonodromyCover, x: FiberPoint| c.fiber(x.label)[x.cycle][0];
            let (sp, sq) = (sheet(&curve, p), sheet(&curve, q));
            let x = comp_c[sp];
            let split = sizes_up[comp_up[2 * sp]] == sizes_c[x];
            let crosswise = comp_up[sheet(&lift, up[0])] != comp_up[sheet(&lift, partner)];
            if comp_c[sq] == x && split && crosswise {
                out.push(DegenerationType::BoundaryI);
            } else {
                out.push(DegenerationType::BoundaryII);
            }
        }
        out
    }

    /// The boundary type when `C` has at most one node and `C~` is connected.
    pub fn degeneration_type(&self) -> Option<DegenerationType> {
        if !self.upstairs().is_connected() {
            return None;
        }
        let types = self.node_types();
        match types.len() {
            0 => Some(DegenerationType::Smooth),
            1 => Some(types[0]),
            _ => None,
        }
    }
}

fn node_image(c: &Perm, from: &MonodromyCover, to: &MonodromyCover, p: FiberPoint) -> FiberPoint {
    to.point_of_sheet(p.label, c.apply(from.fiber(p.label)[p.cycle][0]))
}

fn nodes_match(
    c: &Perm,
    from: &MonodromyCover,
    to: &MonodromyCover,
    a: &[(FiberPoint, FiberPoint)],
    b: &[(FiberPoint, FiberPoint)],
) -> bool {
    let target: HashSet<_> = b.iter().copied().collect();
    a.iter().all(|&(x, y)| target.contains(&normalize(node_image(c, from, to, x), node_image(c, from, to, y))))
}

/// Whether a sheet relabeling carries one nodal cover onto the other, nodes included.
pub fn glued_covers_isomorphic(a: &GluedCover, b: &GluedCover) -> bool {
    let (ca, cb) = (a.cover(), b.cover());
    if a.nodes.len() != b.nodes.len() || ca.degree() != cb.degree() || ca.generators().len() != cb.generators().len() {
        return false;
    }
    find_symmetric_conjugator(ca.degree(), &ca.generators(), &cb.generators(), |c| {
        nodes_match(c, ca, cb, &a.nodes, &b.nodes)
    })
    .is_some()
}

/// Whether a signed relabeling carries one nodal tower onto the other, nodes included.
pub fn glued_towers_isomorphic(a: &GluedTower, b: &GluedTower) -> Result<bool> {
    let (ta, tb) = (a.tower(), b.tower());
    if ta.degree() != tb.degree()
        || ta.base().genus() != tb.base().genus()
        || ta.branches().len() != tb.branches().len()
    {
        return Err(Error::DegreeMismatch("towers over different bases or of different degree".into()));
    }
    if a.nodes.len() != b.nodes.len() {
        return Ok(false);
    }
    let (la, lb) = (ta.lift(), tb.lift());
    Ok(find_tower_conjugator(ta, tb, |c| nodes_match(c, &la, &lb, &a.nodes, &b.nodes)).is_some())
}

/// The three one-node degenerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// Two copies of `X` glued crosswise over `X/(p~q)`.
    Wirtinger,
    /// An étale double cover with both lifts of `p` glued to those of `q`.
    Unallowable,
    /// A double cover branched at `p` and `q`, the two branch points glued.
    Beauville,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Wirtinger => "I",
            BoundaryKind::Unallowable => "II",
            BoundaryKind::Beauville => "III",
        })
    }
}

/// Glues the tower over the points `p ≠ q` of `C` as in the chosen kind.
///
/// `Wirtinger` needs a split tower over a connected `C`; `Unallowable` an
/// étale tower with connected `C~`; `Beauville` a tower branched exactly at `p`
/// and `q`.
pub fn build_boundary_example(
    kind: BoundaryKind,
    tower: &SignedTower,
    p: FiberPoint,
    q: FiberPoint,
) -> Result<GluedTower> {
    let curve = tower.curve();
    for x in [p, q] {
        if !curve.fiber_point_exists(x) {
            return Err(Error::Precondition(format!("no point {} over label {}", x.cycle + 1, x.label + 1)));
        }
    }
    if p == q {
        return Err(Error::Precondition("the two points to glue coincide".into()));
    }
    let (lp, lq) = (tower.lifts(p), tower.lifts(q));
    let nodes = match kind {
        BoundaryKind::Wirtinger => {
            if tower.generators().iter().any(|g| g.eps() != 0) || !curve.is_connected() {
                return Err(Error::Precondition("Wirtinger gluing needs a split tower over a connected curve".into()));
            }
            vec![(lp[0], lq[1]), (lp[1], lq[0])]
        }
        BoundaryKind::Unallowable => {
            if !tower.is_etale_double() || !tower.lift().is_connected() {
                return Err(Error::Precondition("needs a connected étale double cover".into()));
            }
            vec![(lp[0], lq[0]), (lp[1], lq[1])]
        }
        BoundaryKind::Beauville => {
            let mut ram = tower.ramified_points();
            ram.sort_unstable();
            let mut want = vec![p, q];
            want.sort_unstable();
            if ram != want {
                return Err(Error::Precondition("the double cover must be branched exactly at the two points".into()));
            }
            vec![(lp[0], lq[0])]
        }
    };
    GluedTower::new(tower.clone(), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::SignedPerm;

    fn sp(s: &str, n: usize, eps: u64) -> SignedPerm {
        SignedPerm::new(Perm::parse(s, n).unwrap(), eps).unwrap()
    }

    fn hyperelliptic(points: usize) -> MonodromyCover {
        MonodromyCover::rational(2, vec![Perm::parse("(1 2)", 2).unwrap(); points]).unwrap()
    }

    #[test]
    fn pentagon_of_lines() {
        // five rational components meeting pairwise, one node over each of ten labels
        let lines = MonodromyCover::rational(5, vec![Perm::identity(5); 10]).unwrap();
        let mut nodes = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                let label = nodes.len();
                nodes.push((FiberPoint::new(label, i), FiberPoint::new(label, j)));
            }
        }
        let q = GluedCover::new(lines, nodes).unwrap();
        assert_eq!(q.arithmetic_genus(), 6);
        assert!(q.is_connected());
    }

    #[test]
    fn wirtinger_is_allowable_type_one() {
        let x = hyperelliptic(10);
        assert_eq!(x.genus().unwrap(), 4);
        let t = SignedTower::split(&x);
        let g =
            build_boundary_example(BoundaryKind::Wirtinger, &t, FiberPoint::new(0, 0), FiberPoint::new(1, 0)).unwrap();
        assert_eq!(g.downstairs().arithmetic_genus(), 5);
        assert_eq!(g.upstairs().arithmetic_genus(), 9);
        assert!(g.is_allowable().allowable);
        assert_eq!(g.degeneration_type(), Some(DegenerationType::BoundaryI));
    }

    #[test]
    fn type_two_is_unallowable() {
        let t = SignedTower::rational(
            2,
            vec![
                sp("(1 2)", 2, 3),
                sp("(1 2)", 2, 0),
                sp("(1 2)", 2, 3),
                sp("(1 2)", 2, 0),
                sp("()", 2, 0),
                sp("()", 2, 0),
            ],
        )
        .unwrap();
        let g = build_boundary_example(BoundaryKind::Unallowable, &t, FiberPoint::new(4, 0), FiberPoint::new(5, 1))
            .unwrap();
        assert_eq!(g.downstairs_nodes().len(), 1);
        assert_eq!(g.nodes().len(), 2);
        assert!(!g.is_allowable().allowable);
        assert_eq!(g.degeneration_type(), Some(DegenerationType::BoundaryII));
    }

    #[test]
    fn type_three_is_allowable() {
        let t = SignedTower::rational(2, vec![sp("(1 2)", 2, 0), sp("(1 2)", 2, 0), sp("()", 2, 1), sp("()", 2, 1)])
            .unwrap();
        let g =
            build_boundary_example(BoundaryKind::Beauville, &t, FiberPoint::new(2, 0), FiberPoint::new(3, 0)).unwrap();
        let report = g.involution_report();
        assert_eq!(report.fixed().len(), 2);
        assert!(g.is_allowable().allowable);
        assert_eq!(g.degeneration_type(), Some(DegenerationType::BoundaryIII));
        assert!(!GluedTower::smooth(t).is_allowable().allowable);
    }

    #[test]
    fn coincident_points_are_rejected() {
        let t = SignedTower::split(&hyperelliptic(4));
        let p = FiberPoint::new(0, 0);
        assert!(build_boundary_example(BoundaryKind::Wirtinger, &t, p, p).is_err());
    }

    #[test]
    fn unstable_gluing_is_rejected() {
        let t = SignedTower::split(&hyperelliptic(4));
        let lift = t.lift();
        assert_eq!(lift.fiber(0).len(), 2);
        let nodes = vec![(FiberPoint::new(0, 0), FiberPoint::new(1, 0))];
        assert!(GluedTower::new(t, nodes).is_err());
    }
}
