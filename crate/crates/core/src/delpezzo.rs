//! Picard lattices of blowups of the plane at `r ≤ 6` points.
//!
//! A class `d h + Σ c_i e_i` is stored as `[d, c_1, ..., c_r]` with
//! `h² = 1`, `e_i² = −1` and `K = −3h + Σ e_i`. Lines are the classes with
//! `D² = D·K = −1`; roots are the classes with `α² = −2`, `α·K = 0`, and the
//! reflections `x ↦ x + (x·α) α` generate the Weyl group.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::cover::{FiberPoint, GluedCover, MonodromyCover};
use crate::error::{Error, Result};
use crate::group;
use crate::perm::Perm;

pub const MAX_BLOWUPS: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DivisorClass {
    coefficients: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() > MAX_BLOWUPS + 1 {
            return Err(Error::Precondition(format!("a class needs 1..=7 coefficients, got {}", coefficients.len())));
        }
        Ok(DivisorClass { coefficients })
    }

    pub fn h(r: usize) -> Self {
        let mut c = vec![0; r + 1];
        c[0] = 1;
        DivisorClass { coefficients: c }
    }

    /// The exceptional class `e_i`, `1 ≤ i ≤ r`.
    pub fn e(r: usize, i: usize) -> Self {
        let mut c = vec![0; r + 1];
        c[i] = 1;
        DivisorClass { coefficients: c }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn degree(&self) -> i64 {
        self.coefficients[0]
    }

    pub fn dot(&self, other: &DivisorClass) -> i64 {
        let (a, b) = (&self.coefficients, &other.coefficients);
        a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass { coefficients: self.coefficients.iter().map(|x| k * x).collect() }
    }

    /// The same class on a lattice with more blown-up points.
    pub fn extend(&self, r: usize) -> DivisorClass {
        let mut c = self.coefficients.clone();
        c.resize(r + 1, 0);
        DivisorClass { coefficients: c }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let term = |c: i64, name: String, out: &mut String| {
            if c == 0 {
                return;
            }
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}{name}"));
        };
        term(self.coefficients[0], "h".into(), &mut out);
        for (i, &c) in self.coefficients.iter().enumerate().skip(1) {
            term(c, format!("e{i}"), &mut out);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// The lattice `Z h ⊕ Z e_1 ⊕ ... ⊕ Z e_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PicLattice {
    pub r: usize,
}

impl PicLattice {
    pub fn new(r: usize) -> Result<Self> {
        if r > MAX_BLOWUPS {
            return Err(Error::Precondition(format!("at most {MAX_BLOWUPS} blowups, got {r}")));
        }
        Ok(PicLattice { r })
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    pub fn canonical(&self) -> DivisorClass {
        let mut c = vec![1; self.r + 1];
        c[0] = -3;
        DivisorClass { coefficients: c }
    }

    /// All classes with `D² = square` and `D·K = k_degree`.
    ///
    /// `Σ c_i = −k_degree − 3d` and `Σ c_i² = d² − square`, so Cauchy–Schwarz
    /// bounds `d`; the multiplicities are then bounded by `Σ c_i²`.
    fn classes_with(&self, square: i64, k_degree: i64) -> Vec<DivisorClass> {
        let r = self.r as i64;
        let mut out = Vec::new();
        if r == 0 {
            for d in -3i64..=3 {
                if d * d == square && -3 * d == k_degree {
                    out.push(DivisorClass { coefficients: vec![d] });
                }
            }
            return out;
        }
        let feasible = |d: i64| {
            let s = -k_degree - 3 * d;
            let q = d * d - square;
            q >= 0 && s * s <= r * q
        };
        let mut bound = 0i64;
        while bound < 64 && (feasible(bound + 1) || feasible(-bound - 1) || bound < 4) {
            bound += 1;
        }
        for d in -bound..=bound {
            if !feasible(d) {
                continue;
            }
            let sum = -k_degree - 3 * d;
            let sq = d * d - square;
            let m = (sq as f64).sqrt() as i64 + 1;
            let mut c = vec![0i64; self.r];
            search(&mut c, 0, sum, sq, m, &mut |c| {
                let mut coefficients = vec![d];
                coefficients.extend_from_slice(c);
                out.push(DivisorClass { coefficients });
            });
        }
        out.sort();
        out
    }

    /// The exceptional curves: `D² = D·K = −1`.
    pub fn lines(&self) -> Vec<DivisorClass> {
        self.classes_with(-1, -1)
    }

    pub fn roots(&self) -> Vec<DivisorClass> {
        self.classes_with(-2, 0)
    }

    pub fn reflect(&self, x: &DivisorClass, alpha: &DivisorClass) -> DivisorClass {
        x.add(&alpha.scale(x.dot(alpha)))
    }
}

fn search(c: &mut Vec<i64>, i: usize, sum: i64, sq: i64, m: i64, emit: &mut dyn FnMut(&[i64])) {
    if i == c.len() {
        if sum == 0 && sq == 0 {
            emit(c);
        }
        return;
    }
    let rest = (c.len() - i - 1) as i64;
    for v in -m..=m {
        let (s, q) = (sum - v, sq - v * v);
        if q < 0 || s * s > rest * q || (rest == 0 && (s != 0 || q != 0)) {
            continue;
        }
        c[i] = v;
        search(c, i + 1, s, q, m, emit);
    }
    c[i] = 0;
}

/// The exceptional curves on the blowup at `r` points.
pub fn lines(r: usize) -> Result<Vec<DivisorClass>> {
    Ok(PicLattice::new(r)?.lines())
}

/// Lines joined when they meet once.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub nodes: Vec<DivisorClass>,
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn from_classes(nodes: Vec<DivisorClass>) -> Self {
        let mut edges = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i].dot(&nodes[j]) == 1 {
                    edges.push((i, j));
                }
            }
        }
        IncidenceGraph { nodes, edges }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.nodes[i].dot(&self.nodes[j]) == 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// `(v, k, λ, μ)` when the graph is strongly regular.
    pub fn strongly_regular_parameters(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.nodes.len();
        let deg = self.degrees();
        let k = *deg.first()?;
        if deg.iter().any(|&d| d != k) {
            return None;
        }
        let (mut lambda, mut mu) = (None, None);
        for i in 0..n {
            for j in i + 1..n {
                let common = (0..n).filter(|&x| x != i && x != j && self.adjacent(i, x) && self.adjacent(j, x)).count();
                let slot = if self.adjacent(i, j) { &mut lambda } else { &mut mu };
                match *slot {
                    None => *slot = Some(common),
                    Some(c) if c != common => return None,
                    _ => {}
                }
            }
        }
        Some((n, k, lambda.unwrap_or(0), mu.unwrap_or(0)))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for (i, c) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{c}\"];\n"));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  n{a} -- n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn incidence_graph(r: usize) -> Result<IncidenceGraph> {
    if r != 5 && r != 6 {
        return Err(Error::Precondition(format!("incidence graphs are built for r = 5, 6, got {r}")));
    }
    Ok(IncidenceGraph::from_classes(lines(r)?))
}

/// Triples of pairwise meeting lines summing to `−K`, as sorted indices into `lines(6)`.
pub fn tritangents() -> Vec<[usize; 3]> {
    let lat = PicLattice { r: 6 };
    let ls = lat.lines();
    let anti = lat.canonical().scale(-1);
    let mut out = Vec::new();
    for a in 0..ls.len() {
        for b in a + 1..ls.len() {
            if ls[a].dot(&ls[b]) != 1 {
                continue;
            }
            for c in b + 1..ls.len() {
                if ls[a].dot(&ls[c]) == 1 && ls[b].dot(&ls[c]) == 1 && ls[a].add(&ls[b]).add(&ls[c]) == anti {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Two sextuples of pairwise disjoint lines, `a[i]` disjoint from `b[i]` and
/// meeting every other `b[j]`. Indices refer to `lines(6)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleSix {
    pub a: [usize; 6],
    pub b: [usize; 6],
}

impl DoubleSix {
    /// The unordered pair of sides.
    pub fn key(&self) -> (Vec<usize>, Vec<usize>) {
        let (mut a, mut b) = (self.a.to_vec(), self.b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// All sets of six pairwise disjoint lines.
fn sixers(ls: &[DivisorClass]) -> Vec<Vec<usize>> {
    fn grow(ls: &[DivisorClass], cur: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == 6 {
            out.push(cur.clone());
            return;
        }
        for x in from..ls.len() {
            if cur.iter().all(|&y| ls[x].dot(&ls[y]) == 0) {
                cur.push(x);
                grow(ls, cur, x + 1, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(ls, &mut Vec::new(), 0, &mut out);
    out
}

/// Every double-six, found by pairing sextuples of disjoint lines.
pub fn double_sixes() -> Vec<DoubleSix> {
    let ls = PicLattice { r: 6 }.lines();
    let all = sixers(&ls);
    let set: HashSet<Vec<usize>> = all.iter().cloned().collect();
    let mut out = BTreeSet::new();
    for a in &all {
        let b: Vec<usize> = a
            .iter()
            .map(|&ai| {
                let partners: Vec<usize> = (0..ls.len())
                    .filter(|x| !a.contains(x))
                    .filter(|&x| a.iter().all(|&aj| ls[x].dot(&ls[aj]) == if aj == ai { 0 } else { 1 }))
                    .collect();
                if partners.len() == 1 {
                    partners[0]
                } else {
                    usize::MAX
                }
            })
            .collect();
        if b.contains(&usize::MAX) {
            continue;
        }
        let mut sorted = b.clone();
        sorted.sort_unstable();
        if !set.contains(&sorted) {
            continue;
        }
        let ds = DoubleSix { a: a.clone().try_into().expect("six"), b: b.try_into().expect("six") };
        let (first, _) = ds.key();
        if first == *a {
            out.insert(ds);
        }
    }
    out.into_iter().collect()
}

/// The Weyl group acting on the lines of `lines(r)` by reflections.
#[derive(Clone, Debug)]
pub struct WeylAction {
    pub lines: Vec<DivisorClass>,
    pub roots: Vec<DivisorClass>,
    pub generators: Vec<Perm>,
}

pub fn weyl_action(r: usize) -> Result<WeylAction> {
    let lat = PicLattice::new(r)?;
    let ls = lat.lines();
    let index: BTreeMap<&DivisorClass, usize> = ls.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let roots = lat.roots();
    let mut generators = Vec::new();
    for alpha in roots.iter().filter(|a| a.coefficients().iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)) {
        let images = ls
            .iter()
            .map(|l| index.get(&lat.reflect(l, alpha)).copied())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Precondition(format!("reflection in {alpha} does not preserve lines")))?;
        let p = Perm::from_images(images)?;
        if !generators.contains(&p) {
            generators.push(p);
        }
    }
    Ok(WeylAction { lines: ls, roots, generators })
}

/// `(|W|, |Stab(line)|)` for the Weyl group acting on the lines.
pub fn weyl_orders(r: usize) -> Result<(u128, u128)> {
    if r != 5 && r != 6 {
        return Err(Error::Precondition(format!("Weyl orders are computed for r = 5, 6, got {r}")));
    }
    let w = weyl_action(r)?;
    let n = w.lines.len();
    Ok((group::group_order(n, &w.generators)?, group::stabilizer_order(n, &w.generators, 0)?))
}

/// Sizes of the orbits of a double-six under the Weyl group, as an orbit of
/// unordered pairs of sides.
pub fn double_six_orbit(ds: &DoubleSix) -> Result<usize> {
    let w = weyl_action(6)?;
    let start = ds.key();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for g in &w.generators {
            let map = |s: &[usize]| {
                let mut v: Vec<usize> = s.iter().map(|&x| g.apply(x)).collect();
                v.sort_unstable();
                v
            };
            let (x, y) = (map(&a), map(&b));
            let key = if x <= y { (x, y) } else { (y, x) };
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    Ok(seen.len())
}

/// The 27 lines split by intersection with a marked line.
#[derive(Clone, Debug)]
pub struct MarkClassification {
    pub mark: DivisorClass,
    pub meeting: Vec<DivisorClass>,
    pub disjoint: Vec<DivisorClass>,
}

impl MarkClassification {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (1, self.meeting.len(), self.disjoint.len())
    }
}

pub fn mark_and_classify(mark: &DivisorClass) -> Result<MarkClassification> {
    let lat = PicLattice { r: 6 };
    if mark.rank() != 7 || mark.dot(mark) != -1 || mark.dot(&lat.canonical()) != -1 {
        return Err(Error::Precondition(format!("{mark} is not a line of the cubic surface")));
    }
    let ls = lat.lines();
    let meeting = ls.iter().filter(|l| l.dot(mark) == 1).cloned().collect();
    let disjoint = ls.iter().filter(|l| *l != mark && l.dot(mark) == 0).cloned().collect();
    Ok(MarkClassification { mark: mark.clone(), meeting, disjoint })
}

/// An object of the nodal cubic: a line through the node (the image of a pair
/// `a_i, b_i` of a double-six) or one of the fifteen other lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodalLine {
    Double(usize),
    Single(usize, usize),
}

impl fmt::Display for NodalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodalLine::Double(i) => write!(f, "l{i}"),
            NodalLine::Single(i, j) => write!(f, "l{i}{j}"),
        }
    }
}

/// The lines of a nodal cubic as the quotient of the 27 lines by a double-six.
#[derive(Clone, Debug)]
pub struct NodalStructure {
    pub double_six: DoubleSix,
    pub objects: Vec<NodalLine>,
    /// Preimages in `lines(6)` of each object.
    pub preimages: Vec<Vec<usize>>,
    /// Incidences involving at least one single line.
    pub edges: Vec<(NodalLine, NodalLine)>,
    /// Pairs whose preimages disagree about meeting.
    pub conflicts: Vec<(NodalLine, NodalLine)>,
}

impl NodalStructure {
    pub fn doubled(&self) -> usize {
        self.objects.iter().filter(|o| matches!(o, NodalLine::Double(_))).count()
    }

    pub fn singles(&self) -> usize {
        self.objects.len() - self.doubled()
    }

    pub fn meets(&self, x: NodalLine, y: NodalLine) -> bool {
        self.edges.contains(&order(x, y))
    }

    /// Incidence prescribed for the nodal cubic.
    pub fn expected_meets(x: NodalLine, y: NodalLine) -> bool {
        use NodalLine::*;
        match (x, y) {
            (Double(_), Double(_)) => false,
            (Double(k), Single(i, j)) | (Single(i, j), Double(k)) => k == i || k == j,
            (Single(i, j), Single(k, l)) => i != k && i != l && j != k && j != l,
        }
    }

    /// Image of an object under a permutation of the six indices.
    pub fn act(sigma: &Perm, x: NodalLine) -> NodalLine {
        match x {
            NodalLine::Double(i) => NodalLine::Double(sigma.apply(i)),
            NodalLine::Single(i, j) => {
                let (a, b) = (sigma.apply(i), sigma.apply(j));
                NodalLine::Single(a.min(b), a.max(b))
            }
        }
    }

    /// Whether a permutation of the indices preserves incidence.
    pub fn is_symmetry(&self, sigma: &Perm) -> bool {
        self.objects.iter().all(|&x| {
            self.objects.iter().all(|&y| self.meets(x, y) == self.meets(Self::act(sigma, x), Self::act(sigma, y)))
        })
    }
}

fn order(x: NodalLine, y: NodalLine) -> (NodalLine, NodalLine) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Collapses the first double-six pairwise; the remaining fifteen lines are
/// indexed by the two `a_i` they meet.
pub fn nodal_specialize() -> NodalStructure {
    let ls = PicLattice { r: 6 }.lines();
    let ds = double_sixes().into_iter().next().expect("the cubic surface has double-sixes");
    let mut objects = Vec::new();
    let mut preimages = Vec::new();
    for i in 0..6 {
        objects.push(NodalLine::Double(i));
        preimages.push(vec![ds.a[i], ds.b[i]]);
    }
    for x in 0..ls.len() {
        if ds.a.contains(&x) || ds.b.contains(&x) {
            continue;
        }
        let met: Vec<usize> = (0..6).filter(|&i| ls[x].dot(&ls[ds.a[i]]) == 1).collect();
        objects.push(NodalLine::Single(met[0], met[1]));
        preimages.push(vec![x]);
    }
    let mut edges = Vec::new();
    let mut conflicts = Vec::new();
    for u in 0..objects.len() {
        for v in u + 1..objects.len() {
            let meet: BTreeSet<bool> = preimages[u]
                .iter()
                .flat_map(|&p| preimages[v].iter().map(move |&q| (p, q)))
                .map(|(p, q)| ls[p].dot(&ls[q]) == 1)
                .collect();
            let both_double = matches!((objects[u], objects[v]), (NodalLine::Double(_), NodalLine::Double(_)));
            if both_double {
                continue;
            }
            if meet.len() > 1 {
                conflicts.push(order(objects[u], objects[v]));
            } else if meet.contains(&true) {
                edges.push(order(objects[u], objects[v]));
            }
        }
    }
    edges.sort();
    NodalStructure { double_six: ds, objects, preimages, edges, conflicts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegreObject {
    Ruling(usize),
    Plane(usize, usize),
}

impl fmt::Display for SegreObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegreObject::Ruling(i) => write!(f, "R{i}"),
            SegreObject::Plane(i, j) => write!(f, "P{i}{j}"),
        }
    }
}

/// Dual graph of a plane quintic made of a conic and three concurrent lines.
#[derive(Clone, Debug)]
pub struct WheelModel {
    pub components: Vec<&'static str>,
    /// Intersection points between components, with multiplicity.
    pub meetings: Vec<(usize, usize, usize)>,
    /// Components through the common point of the lines.
    pub triple_point: Vec<usize>,
}

/// The Fano-surface model of the Segre cubic threefold.
#[derive(Clone, Debug)]
pub struct SegreStructure {
    pub objects: Vec<SegreObject>,
    pub incidences: Vec<(SegreObject, SegreObject)>,
    /// `{R_i, R_j, Π_ij}`.
    pub ruling_triples: Vec<[SegreObject; 3]>,
    /// `{Π_ij, Π_kl, Π_mn}` for a partition into three pairs.
    pub plane_triples: Vec<[SegreObject; 3]>,
    /// Five lines pairwise meeting once: five rational components, ten nodes.
    pub pentagon: GluedCover,
    pub wheel: WheelModel,
}

pub fn segre_structure() -> Result<SegreStructure> {
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    let mut objects: Vec<SegreObject> = (0..6).map(SegreObject::Ruling).collect();
    objects.extend(pairs.iter().map(|&(i, j)| SegreObject::Plane(i, j)));
    let mut incidences = Vec::new();
    let mut ruling_triples = Vec::new();
    for &(i, j) in &pairs {
        incidences.push((SegreObject::Ruling(i), SegreObject::Plane(i, j)));
        incidences.push((SegreObject::Ruling(j), SegreObject::Plane(i, j)));
        ruling_triples.push([SegreObject::Ruling(i), SegreObject::Ruling(j), SegreObject::Plane(i, j)]);
    }
    incidences.sort();
    let mut plane_triples = Vec::new();
    for &(a, b) in pairs.iter().filter(|p| p.0 == 0) {
        let rest: Vec<usize> = (0..6).filter(|&x| x != a && x != b).collect();
        for &k in &rest[1..] {
            let last: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != k).collect();
            plane_triples.push([
                SegreObject::Plane(a, b),
                SegreObject::Plane(rest[0], k),
                SegreObject::Plane(last[0], last[1]),
            ]);
        }
    }
    let labels = 10;
    let cover = MonodromyCover::rational(5, vec![Perm::identity(5); labels])?;
    let nodes: Vec<(FiberPoint, FiberPoint)> = (0..5)
        .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
        .enumerate()
        .map(|(k, (i, j))| (cover.point_of_sheet(k, i), cover.point_of_sheet(k, j)))
        .collect();
    let pentagon = GluedCover::new(cover, nodes)?;
    let wheel = WheelModel {
        components: vec!["conic", "line 1", "line 2", "line 3"],
        meetings: vec![(0, 1, 2), (0, 2, 2), (0, 3, 2)],
        triple_point: vec![1, 2, 3],
    };
    Ok(SegreStructure { objects, incidences, ruling_triples, plane_triples, pentagon, wheel })
}
