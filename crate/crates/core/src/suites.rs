//! Seeded verification suites.
//!
//! Each suite draws its random instances from one ChaCha8 stream seeded by the
//! configured seed, so a report depends only on the seed, the case count and
//! the crate version. Report lines are sorted by check id.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{
    build_boundary_example, covers_isomorphic, glued_covers_isomorphic, glued_towers_isomorphic, BoundaryKind,
    DegenerationType, FiberPoint, GluedCover, GluedTower, MonodromyCover, SignedTower,
};
use crate::delpezzo;
use crate::error::{Error, Result};
use crate::f2::{self, fano, isotropic, QuadraticFormF2, SymplecticF2};
use crate::instances::{
    random_bigonal_instance, random_cartesian_bihyperelliptic, random_cover_with_group, random_etale_tower,
    random_noncartesian_bielliptic, random_rational_cover, random_signed_tower, random_tetragonal_instance,
    random_two_point_branched,
};
use crate::perm::{compose, Perm};
use crate::polygonal::{
    bigonal, bigonal_diagram, branch_exchange, cartesian_factors, describe_cycle_type, describe_signed, direct_image,
    factors_through_hyperelliptic, fiber_product, is_cartesian, local_tags, relative_orientation, tetragonal,
    trigonal_forward, trigonal_inverse, wc2_subgroup_classes, wc2_subgroups, Construction,
};
use crate::weyl::{self, SubgroupRecord};

pub const SUITES: [&str; 13] = [
    "bigonal-symmetry",
    "branch-exchange",
    "recillas",
    "triality",
    "local-pictures",
    "genus-shadows",
    "bielliptic",
    "cartesian",
    "f2-identities",
    "fano-diagram",
    "delpezzo-census",
    "wd4-lattice",
    "allowability",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases per check; `None` takes the suite default.
    pub cases: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, cases: None }
    }
}

/// Random cases drawn by a suite when none are configured; zero for the
/// exhaustive suites.
pub fn default_cases(suite: &str) -> usize {
    match suite {
        "triality" => 100,
        "bielliptic" | "allowability" => 50,
        "f2-identities" | "fano-diagram" | "delpezzo-census" | "wd4-lattice" => 0,
        _ => 200,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CheckLine {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {}/{} {}", self.suite, c.check, c.detail)?;
        }
        writeln!(
            f,
            "summary {} seed={} cases={} pass={} fail={}",
            self.suite,
            self.seed,
            self.cases,
            self.checks.len() - self.failures(),
            self.failures()
        )
    }
}

pub fn run_suite(suite: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Precondition(format!("unknown suite {suite:?}; known: {}", SUITES.join(", "))));
    }
    let cases = config.cases.unwrap_or_else(|| default_cases(suite));
    if cases == 0 && default_cases(suite) > 0 {
        return Err(Error::Precondition("cases must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut b = Builder::default();
    match suite {
        "bigonal-symmetry" => bigonal_symmetry(&mut rng, cases, &mut b),
        "branch-exchange" => branch_exchange_suite(&mut rng, cases, &mut b),
        "recillas" => recillas(&mut rng, cases, &mut b),
        "triality" => triality(&mut rng, cases, &mut b),
        "local-pictures" => local_pictures(&mut rng, cases, &mut b),
        "genus-shadows" => genus_shadows(&mut rng, cases, &mut b),
        "bielliptic" => bielliptic(&mut rng, cases, &mut b),
        "cartesian" => cartesian(&mut rng, cases, &mut b),
        "f2-identities" => f2_identities(&mut b),
        "fano-diagram" => fano_diagram(&mut b),
        "delpezzo-census" => delpezzo_census(&mut b)?,
        "wd4-lattice" => wd4_lattice(&mut b),
        _ => allowability(&mut rng, cases, &mut b),
    }
    let mut checks = b.checks;
    checks.sort();
    Ok(SuiteReport { suite: suite.to_string(), seed: config.seed, cases, checks })
}

type Outcome = std::result::Result<(), String>;

trait OrFail<T> {
    fn or_fail(self) -> std::result::Result<T, String>;
}

impl<T> OrFail<T> for Result<T> {
    fn or_fail(self) -> std::result::Result<T, String> {
        self.map_err(|e| e.to_string())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Per-check case counter keeping the first failure.
struct Tally {
    check: &'static str,
    total: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn new(check: &'static str) -> Self {
        Tally { check, total: 0, failed: 0, first: None }
    }

    fn check(&mut self, case: usize, f: impl FnOnce() -> Outcome) {
        self.add(case, f());
    }

    fn add(&mut self, case: usize, outcome: Outcome) {
        self.total += 1;
        if let Err(msg) = outcome {
            self.failed += 1;
            self.first.get_or_insert_with(|| format!("case {case}: {msg}"));
        }
    }
}

#[derive(Default)]
struct Builder {
    checks: Vec<CheckLine>,
}

impl Builder {
    fn line(&mut self, check: &str, pass: bool, detail: String) {
        self.checks.push(CheckLine { check: check.to_string(), pass, detail });
    }

    fn tally(&mut self, t: Tally, extra: &str) {
        let sep = if extra.is_empty() { "" } else { " " };
        let detail = match &t.first {
            None => format!("{}/{} cases{sep}{extra}", t.total, t.total),
            Some(first) => format!("{}/{} failed{sep}{extra}; {first}", t.failed, t.total),
        };
        self.line(t.check, t.failed == 0 && t.total > 0, detail);
    }

    /// A single exact comparison.
    fn exact<T: PartialEq + fmt::Debug>(&mut self, check: &str, got: T, want: T) {
        let pass = got == want;
        let detail = if pass { format!("{got:?}") } else { format!("got {got:?}, want {want:?}") };
        self.line(check, pass, detail);
    }
}

fn coverage(check: &str, b: &mut Builder, seen: &BTreeSet<String>, want: &[&str]) {
    let missing: Vec<&str> = want.iter().copied().filter(|w| !seen.contains(*w)).collect();
    let seen: Vec<&str> = seen.iter().map(String::as_str).collect();
    let detail = if missing.is_empty() {
        format!("seen {}", seen.join(","))
    } else {
        format!("seen {}; missing {}", seen.join(","), missing.join(","))
    };
    b.line(check, missing.is_empty(), detail);
}

const BIGONAL_CASES: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];
const TRIGONAL_CASES: [&str; 5] = ["i", "ii", "iii", "iv", "v"];
const TETRAGONAL_CASES: [&str; 7] = ["1", "2", "3", "4", "5", "6", "7"];

fn bigonal_symmetry(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut involution = Tally::new("involution");
    let mut diagram = Tally::new("diagram");
    let mut seen = BTreeSet::new();
    let mut by_genus = [0usize; 3];
    for case in 0..cases {
        let genus = case % 3;
        by_genus[genus] += 1;
        let labels = rng.gen_range(2..=6);
        let t = random_bigonal_instance(rng, genus, labels);
        if let Ok(tags) = local_tags(Construction::Bigonal, &t) {
            seen.extend(tags.into_iter().map(|tag| tag.case));
        }
        involution.check(case, || {
            let out = bigonal(&t).or_fail()?;
            let back = bigonal(&out).or_fail()?;
            ensure(glued_towers_isomorphic(&back, &t).or_fail()?, || "bigonal twice is not the input".into())
        });
        diagram.check(case, || {
            let out = bigonal(&t).or_fail()?;
            let curves = bigonal_diagram(t.tower()).or_fail()?;
            let degrees: Vec<usize> = curves.iter().map(|c| c.cover.degree()).collect();
            ensure(degrees == [8, 4, 4, 4, 2, 2, 2, 1], || format!("degrees {degrees:?}"))?;
            let find = |name: &str| &curves.iter().find(|c| c.name == name).expect("named curve").cover;
            let expected = [
                ("C~", t.tower().lift()),
                ("C", t.tower().curve()),
                ("C~'", out.tower().lift()),
                ("C'", out.tower().curve()),
            ];
            for (name, cover) in expected {
                ensure(covers_isomorphic(find(name), &cover), || format!("{name} is not the expected quotient"))?;
            }
            Ok(())
        });
    }
    b.tally(involution, &format!("base genus 0/1/2: {}/{}/{}", by_genus[0], by_genus[1], by_genus[2]));
    b.tally(diagram, "");
    coverage("local-cases", b, &seen, &BIGONAL_CASES);
    b.exact("wc2-subgroups", (wc2_subgroups().len(), wc2_subgroup_classes()), (10, 8));
}

fn branch_exchange_suite(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut exchange = Tally::new("exchange");
    let mut seen = BTreeSet::new();
    for case in 0..cases {
        let labels = rng.gen_range(2..=6);
        let t = random_bigonal_instance(rng, case % 3, labels);
        if let Ok(tags) = local_tags(Construction::Bigonal, &t) {
            seen.extend(tags.into_iter().map(|tag| tag.case));
        }
        exchange.check(case, || {
            let out = bigonal(&t).or_fail()?;
            let counts = branch_exchange(&t, &out).or_fail()?;
            match counts.iter().find(|c| !c.exchanged()) {
                None => Ok(()),
                Some(c) => Err(format!("label {}: f={} g={} f'={} g'={}", c.label + 1, c.f, c.g, c.f_out, c.g_out)),
            }
        });
    }
    b.tally(exchange, "");
    coverage("local-cases", b, &seen, &BIGONAL_CASES);
}

fn recillas(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut genus = Tally::new("genus-relation");
    let mut genera = BTreeSet::new();
    for case in 0..cases {
        let labels = rng.gen_range(3..=10);
        let t = random_etale_tower(rng, 3, labels);
        genus.check(case, || {
            let g = t.curve().genus().or_fail()?;
            genera.insert(g);
            let x = trigonal_forward(&GluedTower::smooth(t.clone())).or_fail()?;
            ensure(x.arithmetic_genus() == g - 1, || format!("g(C)={g}, p_a(X)={}", x.arithmetic_genus()))
        });
    }
    let range = match (genera.first(), genera.last()) {
        (Some(lo), Some(hi)) => format!("genus C in {lo}..={hi}"),
        _ => String::new(),
    };
    b.tally(genus, &range);

    let mut fwd_inv = Tally::new("forward-after-inverse");
    for case in 0..cases {
        let labels = rng.gen_range(3..=8);
        let x = random_rational_cover(rng, 4, labels, true);
        fwd_inv.check(case, || {
            let t = trigonal_inverse(&x).or_fail()?;
            let back = trigonal_forward(&t).or_fail()?;
            ensure(glued_covers_isomorphic(&back, &GluedCover::smooth(x.clone())), || "X not recovered".into())
        });
    }
    b.tally(fwd_inv, "");

    let mut inv_fwd = Tally::new("inverse-after-forward");
    for case in 0..cases {
        let labels = rng.gen_range(3..=8);
        let t = GluedTower::smooth(random_etale_tower(rng, 3, labels));
        inv_fwd.check(case, || {
            let x = trigonal_forward(&t).or_fail()?;
            ensure(x.nodes().is_empty(), || "X of an étale tower has nodes".into())?;
            let back = trigonal_inverse(x.cover()).or_fail()?;
            ensure(glued_towers_isomorphic(&back, &t).or_fail()?, || "tower not recovered".into())
        });
    }
    b.tally(inv_fwd, "");
}

fn same_pair(a: &(GluedTower, GluedTower), b: &(GluedTower, GluedTower)) -> Result<bool> {
    let iso = glued_towers_isomorphic;
    Ok((iso(&a.0, &b.0)? && iso(&a.1, &b.1)?) || (iso(&a.0, &b.1)? && iso(&a.1, &b.0)?))
}

fn triality(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut tally = Tally::new("triality");
    for case in 0..cases {
        let labels = rng.gen_range(3..=7);
        let t = GluedTower::smooth(random_etale_tower(rng, 4, labels));
        tally.check(case, || {
            let (x, y) = tetragonal(&t).or_fail()?;
            let from_x = tetragonal(&x).or_fail()?;
            ensure(same_pair(&from_x, &(t.clone(), y.clone())).or_fail()?, || {
                "first output does not return the triple".into()
            })?;
            let from_y = tetragonal(&y).or_fail()?;
            ensure(same_pair(&from_y, &(t.clone(), x)).or_fail()?, || "second output does not return the triple".into())
        });
    }
    b.tally(tally, "up to conjugacy in WC4");
}

fn glued_at(t: &GluedTower, k: usize) -> bool {
    t.nodes().iter().any(|(a, b)| a.label == k && b.label == k)
}

/// Each local tag's predicted output agrees with the global construction.
fn tags_match(construction: Construction, input: &GluedTower, outputs: &[String]) -> Outcome {
    let tags = local_tags(construction, input).or_fail()?;
    let n = tags.first().map_or(0, |t| t.outputs.len());
    for (k, tag) in tags.iter().enumerate() {
        let got = &outputs[k * n..(k + 1) * n];
        ensure(tag.outputs == got, || format!("label {}: tag {tag}, construction gives {}", k + 1, got.join(" | ")))?;
    }
    Ok(())
}

fn local_pictures(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut split = Tally::new("split-direct-image");
    for case in 0..cases.min(50) {
        let labels = rng.gen_range(3..=6);
        let c = random_cover_with_group(rng, 4, labels, 24);
        split.check(case, || {
            let mut degrees = direct_image(&SignedTower::split(&c)).or_fail()?.component_degrees();
            degrees.sort_unstable();
            ensure(degrees == [1, 1, 4, 4, 6], || format!("degrees {degrees:?}"))
        });
    }
    b.tally(split, "degrees 1,4,6,4,1 over S4 covers");

    let mut bi = Tally::new("bigonal-tags");
    let mut bi_seen = BTreeSet::new();
    for case in 0..cases {
        let labels = rng.gen_range(2..=6);
        let t = random_bigonal_instance(rng, case % 3, labels);
        bi.check(case, || {
            let out = bigonal(&t).or_fail()?;
            let descr: Vec<String> =
                out.tower().branches().iter().enumerate().map(|(k, g)| describe_signed(g, glued_at(&out, k))).collect();
            bi_seen.extend(local_tags(Construction::Bigonal, &t).or_fail()?.into_iter().map(|x| x.case));
            tags_match(Construction::Bigonal, &t, &descr)
        });
    }
    b.tally(bi, "");
    coverage("bigonal-cases", b, &bi_seen, &BIGONAL_CASES);

    let mut tri = Tally::new("trigonal-tags");
    let mut tri_seen = BTreeSet::new();
    for case in 0..cases {
        let labels = rng.gen_range(3..=8);
        let x = random_rational_cover(rng, 4, labels, true);
        tri.check(case, || {
            let t = trigonal_inverse(&x).or_fail()?;
            let descr: Vec<String> = x.branches().iter().map(describe_cycle_type).collect();
            tri_seen.extend(local_tags(Construction::Trigonal, &t).or_fail()?.into_iter().map(|x| x.case));
            tags_match(Construction::Trigonal, &t, &descr)
        });
    }
    b.tally(tri, "");
    coverage("trigonal-cases", b, &tri_seen, &TRIGONAL_CASES);

    let mut tet = Tally::new("tetragonal-tags");
    let mut tet_seen = BTreeSet::new();
    for case in 0..cases {
        let labels = rng.gen_range(3..=7);
        let t = match case % 2 {
            0 => GluedTower::smooth(random_etale_tower(rng, 4, labels)),
            _ => {
                let glued = rng.gen_range(1..=2);
                random_tetragonal_instance(rng, labels, glued)
            }
        };
        tet.check(case, || {
            let (x, y) = tetragonal(&t).or_fail()?;
            for input in [&t, &x, &y] {
                let (p, q) = tetragonal(input).or_fail()?;
                let descr: Vec<String> = (0..input.tower().branches().len())
                    .flat_map(|k| [&p, &q].map(|o| describe_signed(&o.tower().branches()[k], glued_at(o, k))))
                    .collect();
                tet_seen.extend(local_tags(Construction::Tetragonal, input).or_fail()?.into_iter().map(|x| x.case));
                tags_match(Construction::Tetragonal, input, &descr)?;
            }
            Ok(())
        });
    }
    b.tally(tet, "étale and glued inputs with both outputs");
    coverage("tetragonal-cases", b, &tet_seen, &TETRAGONAL_CASES);
}

fn prym_dimension(t: &GluedTower) -> i64 {
    t.upstairs().arithmetic_genus() - t.downstairs().arithmetic_genus()
}

fn genus_shadows(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut tet = Tally::new("tetragonal-genus");
    let mut prym = Tally::new("tetragonal-prym");
    let mut smooth = Tally::new("tetragonal-smooth-etale");
    for case in 0..cases {
        let labels = rng.gen_range(3..=7);
        let t = GluedTower::smooth(random_etale_tower(rng, 4, labels));
        let outputs = tetragonal(&t);
        tet.check(case, || {
            let (x, y) = outputs.clone().or_fail()?;
            let g = t.downstairs().arithmetic_genus();
            let (gx, gy) = (x.downstairs().arithmetic_genus(), y.downstairs().arithmetic_genus());
            ensure(gx == g && gy == g, || format!("p_a(C)={g}, partners {gx}, {gy}"))
        });
        prym.check(case, || {
            let (x, y) = outputs.clone().or_fail()?;
            let dims = [prym_dimension(&t), prym_dimension(&x), prym_dimension(&y)];
            ensure(dims[0] == dims[1] && dims[1] == dims[2], || format!("Prym dimensions {dims:?}"))
        });
        if let Ok((x, y)) = &outputs {
            for o in [x, y] {
                if o.nodes().is_empty() && o.tower().curve().is_connected() && o.tower().lift().is_connected() {
                    smooth.check(case, || {
                        let g = o.tower().curve().genus().or_fail()?;
                        let gt = o.tower().lift().genus().or_fail()?;
                        ensure(o.tower().is_etale_double() && gt == 2 * g - 1, || format!("g(C)={g}, g(C~)={gt}"))
                    });
                }
            }
        }
    }
    b.tally(tet, "");
    b.tally(prym, "");
    b.tally(smooth, "connected smooth outputs");

    let mut pantazis = Tally::new("bigonal-prym");
    let mut by_genus = [0usize; 3];
    for case in 0..cases {
        let genus = case % 3;
        by_genus[genus] += 1;
        let labels = rng.gen_range(2..=6);
        let t = random_bigonal_instance(rng, genus, labels);
        pantazis.check(case, || {
            let out = bigonal(&t).or_fail()?;
            let (a, c) = (prym_dimension(&t), prym_dimension(&out));
            ensure(a == c, || format!("Prym dimensions {a} and {c}"))
        });
    }
    b.tally(pantazis, &format!("base genus 0/1/2: {}/{}/{}", by_genus[0], by_genus[1], by_genus[2]));
}

fn swap_labels(h: &MonodromyCover) -> BTreeSet<usize> {
    (0..h.branches().len()).filter(|&k| !h.branches()[k].is_identity()).collect()
}

/// Cartesian bihyperelliptic over an elliptic `H`: one partner is Cartesian
/// over a copy of `H`, the other is two curves `H^0, H^1` meeting over the
/// branch points of `H`.
fn cartesian_partner_shapes(rng: &mut ChaCha8Rng) -> Outcome {
    let labels = rng.gen_range(8..=10);
    let inst = random_cartesian_bihyperelliptic(rng, 4, labels);
    let gh = inst.h.genus().or_fail()?;
    let gc = [inst.factors.0.lift().genus().or_fail()?, inst.factors.1.lift().genus().or_fail()?];
    let (x, y) = tetragonal(&GluedTower::smooth(inst.tower.clone())).or_fail()?;
    let (cart, red) = if x.tower().curve().is_connected() { (x, y) } else { (y, x) };
    ensure(cart.nodes().is_empty() && cart.tower().is_etale_double(), || "Cartesian partner is not étale".into())?;
    let factors = factors_through_hyperelliptic(&cart.downstairs()).or_fail()?;
    let over_h = factors.iter().find(|f| covers_isomorphic(&f.h, &inst.h));
    let Some(f) = over_h else { return Err("no factorization through a copy of H".into()) };
    let orient = relative_orientation(cart.tower(), &f.blocks).or_fail()?;
    ensure(orient.components().len() == 2 * f.h.components().len(), || "partner over H is not Cartesian".into())?;
    let c1 = red.tower().curve();
    ensure(c1.components().len() == 2, || format!("reducible partner has {} components", c1.components().len()))?;
    let down = red.downstairs();
    let crossing: Vec<(FiberPoint, FiberPoint)> =
        down.nodes().iter().copied().filter(|&(p, q)| down.component_of(p) != down.component_of(q)).collect();
    ensure(crossing.len() == 4 && down.nodes().len() == 4, || {
        format!("{} nodes, {} crossing", down.nodes().len(), crossing.len())
    })?;
    let labels: BTreeSet<usize> = crossing.iter().map(|(p, _)| p.label).collect();
    ensure(labels == swap_labels(&inst.h), || "nodes do not lie over the branch points of H".into())?;
    let mut got = c1.component_genera();
    got.sort_unstable();
    let mut want = vec![gc[0] - 2 * gh, gc[1] - 2 * gh];
    want.sort_unstable();
    ensure(got == want, || format!("component genera {got:?}, want {want:?} (g(H)={gh}, g(C^i)={gc:?})"))?;
    Ok(())
}

/// Non-Cartesian bielliptic: each partner factors through a rational `H_i`
/// branched over two of the four branch points of `E`, with two nodes over the
/// other two.
fn bielliptic_partner_shapes(rng: &mut ChaCha8Rng) -> Outcome {
    let labels = rng.gen_range(8..=9);
    let inst = random_noncartesian_bielliptic(rng, labels);
    let b_all = swap_labels(&inst.e);
    let (x, y) = tetragonal(&GluedTower::smooth(inst.tower.clone())).or_fail()?;
    let mut bs = Vec::new();
    let mut node_labels = Vec::new();
    for o in [&x, &y] {
        let down = o.downstairs();
        ensure(down.cover().is_connected(), || "partner is reducible".into())?;
        let factors = factors_through_hyperelliptic(&down).or_fail()?;
        let rational: Vec<_> = factors.iter().filter(|f| f.h.genus().ok() == Some(0)).collect();
        ensure(rational.len() == 1, || format!("{} rational double quotients", rational.len()))?;
        let bi = swap_labels(&rational[0].h);
        ensure(bi.len() == 2, || format!("#B_i = {}", bi.len()))?;
        ensure(down.nodes().len() == 2, || format!("{} nodes", down.nodes().len()))?;
        bs.push(bi);
        node_labels.push(down.nodes().iter().map(|(p, _)| p.label).collect::<BTreeSet<usize>>());
    }
    ensure(bs[0].is_disjoint(&bs[1]) && bs[0].union(&bs[1]).copied().collect::<BTreeSet<_>>() == b_all, || {
        format!("B_0={:?}, B_1={:?}, B={b_all:?}", bs[0], bs[1])
    })?;
    ensure(node_labels[0] == bs[1] && node_labels[1] == bs[0], || "nodes of C_i do not lie over B_(1-i)".into())
}

fn bielliptic(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut cart = Tally::new("cartesian-input");
    for case in 0..cases {
        cart.add(case, cartesian_partner_shapes(rng));
    }
    b.tally(cart, "one Cartesian partner over H, one H0+H1 meeting in 4 points");
    let mut non = Tally::new("non-cartesian-input");
    for case in 0..cases {
        non.add(case, bielliptic_partner_shapes(rng));
    }
    b.tally(non, "#B_i = 2 for both partners");
}

/// Whether the lift permutes the blocks of a partition of its four sheets.
fn preserves(gens: &[Perm], blocks: [[usize; 2]; 2]) -> bool {
    gens.iter().all(|g| {
        blocks.iter().all(|bl| {
            let mut img = [g.apply(bl[0]), g.apply(bl[1])];
            img.sort_unstable();
            blocks.contains(&img)
        })
    })
}

fn cartesian(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let mut oracle = Tally::new("orientation-oracle");
    let mut factor = Tally::new("fiber-product");
    let mut counts = [0usize; 2];
    for case in 0..cases {
        let labels = rng.gen_range(2..=6);
        let t = random_signed_tower(rng, 2, case % 3, labels);
        let lift = t.lift().generators();
        let all_pairings = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]].iter().all(|&p| preserves(&lift, p));
        let verdict = is_cartesian(&t);
        if let Ok(v) = verdict {
            counts[usize::from(v)] += 1;
        }
        oracle.check(case, || {
            let v = verdict.clone().or_fail()?;
            ensure(v == all_pairings, || format!("is_cartesian={v}, pairings preserved={all_pairings}"))
        });
        if all_pairings {
            factor.check(case, || {
                let (x, y) = cartesian_factors(&t).or_fail()?.ok_or("no factors")?;
                ensure(covers_isomorphic(&fiber_product(&x, &y).or_fail()?, &t.lift()), || {
                    "C~ is not the fiber product".into()
                })
            });
        }
    }
    b.tally(oracle, &format!("cartesian/non-cartesian {}/{}", counts[1], counts[0]));
    b.tally(factor, "");
    let mut rel = Tally::new("relative-orientation");
    for case in 0..cases.min(50) {
        let labels = rng.gen_range(8..=10);
        let inst = random_cartesian_bihyperelliptic(rng, 4, labels);
        rel.check(case, || {
            let o = relative_orientation(&inst.tower, &inst.blocks()).or_fail()?;
            ensure(o.components().len() == 2 * inst.h.components().len(), || "orientation cover is connected".into())?;
            ensure(inst.tower.is_etale_double(), || "tower not étale".into())
        });
    }
    b.tally(rel, "bihyperelliptic towers over H");
}

fn f2_identities(b: &mut Builder) {
    let mut polar = Tally::new("polarization");
    let mut arf = Tally::new("arf-methods");
    let mut diff = Tally::new("arf-difference-pairing");
    let mut torsor = Tally::new("translation-torsor");
    let mut exact = Tally::new("descent-exact-sequence");
    let mut sympl = Tally::new("descent-symplectic");
    let mut coset = Tally::new("descent-form-coset");
    let mut orth = Tally::new("descent-orthogonal");
    let mut iter = Tally::new("iterated-descent");
    let mut iso = Tally::new("isotropic-counts");
    for g in 1..=3usize {
        let s = SymplecticF2::standard(g);
        let forms = f2::all_forms(&s);
        for (k, q) in forms.iter().enumerate() {
            polar.check(k, || {
                for x in 0..s.size() {
                    for y in 0..s.size() {
                        ensure(q.eval(x ^ y) ^ q.eval(x) ^ q.eval(y) == s.pair(x, y), || format!("g={g} x={x} y={y}"))?;
                    }
                }
                Ok(())
            });
            arf.add(
                k,
                ensure(q.arf() == q.arf_by_count() && q.arf() == q.arf_by_basis(), || {
                    format!("g={g} q={}", q.values())
                }),
            );
            diff.check(k, || {
                for nu in 0..s.size() {
                    for sigma in 0..s.size() {
                        let total = q.arf()
                            ^ f2::translate_form(q, nu).arf()
                            ^ f2::translate_form(q, sigma).arf()
                            ^ f2::translate_form(q, nu ^ sigma).arf();
                        ensure(total == s.pair(nu, sigma), || format!("g={g} nu={nu} sigma={sigma}"))?;
                    }
                }
                Ok(())
            });
            if g <= 2 {
                torsor.add(k, {
                    let images: BTreeSet<u64> = (0..s.size()).map(|v| f2::translate_form(q, v).values()).collect();
                    ensure(images.len() as u64 == s.size(), || format!("g={g}: orbit of size {}", images.len()))
                });
            }
        }
        for mu in 1..s.size() {
            let d = match f2::descend_space(&s, mu) {
                Ok(d) => d,
                Err(e) => {
                    exact.add(mu as usize, Err(e.to_string()));
                    continue;
                }
            };
            let perp = s.perp_elements(&[mu]);
            exact.check(mu as usize, || {
                for x in 0..s.size() {
                    ensure(d.project(x).is_some() == (s.pair(x, mu) == 0), || format!("g={g} mu={mu} x={x} domain"))?;
                }
                let kernel: BTreeSet<u64> = perp.iter().copied().filter(|&x| d.project(x) == Some(0)).collect();
                ensure(kernel == BTreeSet::from([0, mu]), || format!("g={g} mu={mu} kernel {kernel:?}"))?;
                let image: BTreeSet<u64> = perp.iter().filter_map(|&x| d.project(x)).collect();
                ensure(image.len() as u64 == d.quotient.size(), || format!("g={g} mu={mu} not onto"))
            });
            sympl.check(mu as usize, || {
                for &x in &perp {
                    for &y in &perp {
                        let (px, py) = (d.project(x).unwrap_or(0), d.project(y).unwrap_or(0));
                        ensure(d.quotient.pair(px, py) == s.pair(x, y), || format!("g={g} mu={mu} x={x} y={y}"))?;
                    }
                }
                Ok(())
            });
            let good: Vec<&QuadraticFormF2> = forms.iter().filter(|q| q.eval(mu) == 0).collect();
            coset.add(mu as usize, {
                let orbit: BTreeSet<u64> = perp.iter().map(|&v| f2::translate_form(good[0], v).values()).collect();
                let goods: BTreeSet<u64> = good.iter().map(|q| q.values()).collect();
                ensure(orbit == goods, || format!("g={g} mu={mu}: descendable forms are not one coset"))
            });
            orth.check(mu as usize, || {
                for q in &good {
                    let qd = f2::descend_form(q, &d).or_fail()?;
                    for &x in &perp {
                        let px = d.project(x).unwrap_or(0);
                        ensure(qd.eval(px) == q.eval(x), || format!("g={g} mu={mu} q={} x={x}", q.values()))?;
                    }
                }
                Ok(())
            });
        }
        if g >= 2 {
            for m1 in 1..s.size() {
                for m2 in m1 + 1..s.size() {
                    if s.pair(m1, m2) != 0 {
                        continue;
                    }
                    iter.check(m1 as usize, || {
                        let d1 = f2::descend_space(&s, m1).or_fail()?;
                        let d12 = f2::descend_space(&d1.quotient, d1.project(m2).unwrap_or(0)).or_fail()?;
                        let d2 = f2::descend_space(&s, m2).or_fail()?;
                        let d21 = f2::descend_space(&d2.quotient, d2.project(m1).unwrap_or(0)).or_fail()?;
                        let via12 = |x: u64| d1.project(x).and_then(|y| d12.project(y));
                        let via21 = |x: u64| d2.project(x).and_then(|y| d21.project(y));
                        let perp = s.perp_elements(&[m1, m2]);
                        for &x in &perp {
                            for &y in &perp {
                                let (a, c) = (via12(x).zip(via12(y)), via21(x).zip(via21(y)));
                                let (Some((a1, a2)), Some((c1, c2))) = (a, c) else {
                                    return Err(format!("g={g} {m1},{m2}: projection undefined"));
                                };
                                ensure(
                                    d12.quotient.pair(a1, a2) == d21.quotient.pair(c1, c2) && (a1 == a2) == (c1 == c2),
                                    || format!("g={g} mu={m1},{m2} x={x} y={y}"),
                                )?;
                            }
                        }
                        Ok(())
                    });
                }
            }
        }
        for r in 1..=g {
            iso.check(r, || {
                let n = isotropic::enumerate_isotropic(&s, r).or_fail()?.len() as u64;
                let want = isotropic::isotropic_count(g, r);
                ensure(n == want, || format!("g={g} r={r}: {n} subspaces, formula {want}"))
            });
        }
        let (even, odd) = f2::parity_counts(g);
        let h = 1u64 << (g - 1);
        let full = 1u64 << g;
        b.exact(&format!("parity-counts-g{g}"), (even, odd), (h * (full + 1), h * (full - 1)));
    }
    b.tally(polar, "g<=3, all forms, all x,y");
    b.tally(arf, "count, basis and default agree");
    b.tally(diff, "g<=3, all forms, all nu,sigma");
    b.tally(torsor, "g<=2");
    b.tally(exact, "g<=3, all mu");
    b.tally(sympl, "g<=3, all mu");
    b.tally(coset, "g<=3, all mu");
    b.tally(orth, "g<=3, all mu");
    b.tally(iter, "g=2,3, all isotropic pairs");
    b.tally(iso, "g<=3");
    for g in 2..=3 {
        let t = f2::descent_arf_table(g);
        b.line(
            &format!("descent-arf-table-g{g}"),
            t.preserved + t.changed > 0,
            format!("preserved={} changed={}", t.preserved, t.changed),
        );
    }
}

fn fano_diagram(b: &mut Builder) {
    let sols = fano::fano_solve(true);
    let orbits = fano::orbits(&sols);
    let shapes: BTreeSet<(u32, u32, u32)> = sols.iter().map(|d| (d.t_count(), d.q_count(), d.c_count())).collect();
    let labels = if shapes.len() == 1 {
        let (t, q, c) = *shapes.iter().next().expect("one shape");
        format!("{t}T/{q}Q/{c}C")
    } else {
        format!("{shapes:?}")
    };
    let pass = sols.len() == 7 && orbits.len() == 1 && labels == "4T/3Q/6C";
    b.line("summary", pass, format!("solutions={} orbit={} labels={labels}", sols.len(), orbits.len()));
    b.exact("rules", sols.iter().all(|d| d.satisfies_rules()), true);
    b.exact("q-collinear", sols.iter().all(|d| d.q_collinear()), true);
    b.exact("collineations", fano::collineations().len(), 168);
    let all = fano::fano_solve(false);
    let extra: Vec<String> = all.iter().filter(|d| d.t_count() == 0).map(fano::describe).collect();
    let pass = all.len() == 8 && extra.len() == 1 && all[..].iter().any(|d| d.t_count() == 0 && d.c_count() == 0);
    b.line("without-t", pass, format!("solutions={} extra={}", all.len(), extra.join(";")));
}

fn delpezzo_census(b: &mut Builder) -> Result<()> {
    let l6 = delpezzo::lines(6)?;
    let tri = delpezzo::tritangents();
    let ds = delpezzo::double_sixes();
    let (w6, s6) = delpezzo::weyl_orders(6)?;
    let pass = l6.len() == 27 && tri.len() == 45 && ds.len() == 36 && w6 == 51840 && s6 == 1920;
    b.line(
        "summary",
        pass,
        format!("lines27={} tritangent={} doublesix={} weyl={w6} stab={s6}", l6.len(), tri.len(), ds.len()),
    );
    let counts: Vec<usize> = (0..=6).map(|r| delpezzo::lines(r).map(|l| l.len()).unwrap_or(0)).collect();
    b.exact("line-counts", counts, vec![0, 1, 3, 6, 10, 16, 27]);
    let g6 = delpezzo::incidence_graph(6)?;
    b.exact("incidence-r6-regular", g6.degrees().iter().copied().collect::<BTreeSet<_>>(), BTreeSet::from([10]));
    b.exact("incidence-r6-strongly-regular", g6.strongly_regular_parameters(), Some((27, 10, 1, 5)));
    let g5 = delpezzo::incidence_graph(5)?;
    b.exact("incidence-r5-strongly-regular", g5.strongly_regular_parameters(), Some((16, 5, 0, 2)));
    let mut per_line = vec![0usize; l6.len()];
    for t in &tri {
        for &x in t {
            per_line[x] += 1;
        }
    }
    b.exact("tritangents-per-line", per_line.iter().copied().collect::<BTreeSet<_>>(), BTreeSet::from([5]));
    b.exact("line-stabilizer-index", w6 / s6.max(1), 27);
    let (w5, _) = delpezzo::weyl_orders(5)?;
    b.exact("r5-group-is-line-stabilizer", w5, s6);
    let orbit = ds.first().map(delpezzo::double_six_orbit).transpose()?.unwrap_or(0);
    b.exact("double-six-stabilizer", (orbit, w6 / orbit.max(1) as u128), (36, 1440));
    let mark = delpezzo::mark_and_classify(&delpezzo::DivisorClass::e(6, 6))?;
    b.exact("mark-classification", mark.sizes(), (1, 10, 16));
    let mut ext: Vec<_> = delpezzo::lines(5)?.iter().map(|l| l.extend(6)).collect();
    ext.sort();
    let mut dis = mark.disjoint.clone();
    dis.sort();
    b.exact("mark-disjoint-are-r5-lines", ext == dis, true);
    let nodal = delpezzo::nodal_specialize();
    b.exact("nodal-counts", (nodal.doubled(), nodal.singles()), (6, 15));
    b.exact("nodal-consistency", nodal.conflicts.len(), 0);
    let rules = nodal.objects.iter().all(|&x| {
        nodal.objects.iter().all(|&y| {
            x == y
                || matches!((x, y), (delpezzo::NodalLine::Double(_), delpezzo::NodalLine::Double(_)))
                || nodal.meets(x, y) == delpezzo::NodalStructure::expected_meets(x, y)
        })
    });
    b.exact("nodal-incidence-rules", rules, true);
    let s6_ok = (0..5).all(|i| nodal.is_symmetry(&Perm::transposition(6, i, i + 1)));
    b.exact("nodal-s6-equivariant", s6_ok, true);
    let segre = delpezzo::segre_structure()?;
    b.exact(
        "segre-census",
        (
            segre.objects.len(),
            segre.ruling_triples.len(),
            segre.plane_triples.len(),
            segre.pentagon.cover().components().len(),
            segre.pentagon.nodes().len(),
            segre.pentagon.arithmetic_genus(),
        ),
        (21, 15, 15, 5, 10, 6),
    );
    Ok(())
}

fn record<'a>(records: &'a [SubgroupRecord], name: &str) -> Option<&'a SubgroupRecord> {
    records.iter().find(|r| r.name == name)
}

fn wd4_lattice(b: &mut Builder) {
    let records = weyl::wd4_lattice();
    let order = |name: &str| record(&records, name).map(|r| r.order);
    let index = |name: &str| record(&records, name).map(|r| r.index);
    b.exact(
        "orders",
        [order("WD4"), order("H0"), order("H~0"), order("N(G)"), order("G"), order("G~0")],
        [Some(192), Some(48), Some(24), Some(64), Some(16), Some(32)],
    );
    b.exact(
        "h-orders",
        [order("H1"), order("H2"), order("H~1"), order("H~2")],
        [Some(48), Some(48), Some(24), Some(24)],
    );
    let tildes: Vec<Option<u128>> =
        records.iter().filter(|r| r.name.starts_with("G~")).map(|r| Some(r.order)).collect();
    b.exact("g-tilde-orders", tildes.clone(), vec![Some(32); tildes.len().max(1)]);
    b.exact("indices", (index("G"), index("N(G)")), (Some(12), Some(3)));
    let elems = |name: &str| record(&records, name).map(weyl::record_elements).unwrap_or_default();
    let (g, ng) = (elems("G"), elems("N(G)"));
    let g_set: BTreeSet<&Perm> = g.iter().collect();
    let squares_in_g = ng.iter().all(|x| g_set.contains(&compose(x, x)));
    b.exact("quotient-klein", (ng.len() / g.len().max(1), squares_in_g), (4, true));
    let mut normalizer = weyl::normalizer_in_wd4(&g);
    normalizer.sort();
    let mut ng_sorted = ng.clone();
    ng_sorted.sort();
    b.exact("normalizer", normalizer == ng_sorted, true);
    let hs: Vec<Vec<Perm>> = ["H~0", "H~1", "H~2"].iter().map(|n| elems(n)).collect();
    let conj =
        (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).any(|(i, j)| weyl::conjugate_in_wd4(&hs[i], &hs[j]));
    b.exact("h-tilde-pairwise-nonconjugate", !conj, true);
}

/// Two distinct points of `C`, drawn uniformly.
fn two_points(rng: &mut ChaCha8Rng, c: &MonodromyCover) -> (FiberPoint, FiberPoint) {
    let points: Vec<FiberPoint> =
        (0..c.branches().len()).flat_map(|k| (0..c.fiber(k).len()).map(move |i| FiberPoint::new(k, i))).collect();
    let i = rng.gen_range(0..points.len());
    let mut j = rng.gen_range(0..points.len() - 1);
    if j >= i {
        j += 1;
    }
    (points[i], points[j])
}

fn allowability(rng: &mut ChaCha8Rng, cases: usize, b: &mut Builder) {
    let verdict = |t: &GluedTower, allowable: bool, ty: DegenerationType| -> Outcome {
        let a = t.is_allowable();
        ensure(a.allowable == allowable, || format!("allowable={} ({})", a.allowable, a.reason))?;
        let got = t.degeneration_type();
        ensure(got == Some(ty), || format!("type {got:?}"))
    };
    let mut wirtinger = Tally::new("wirtinger");
    for case in 0..cases {
        let n = rng.gen_range(2..=4);
        let labels = rng.gen_range(3..=6);
        let c = random_rational_cover(rng, n, labels, true);
        let (p, q) = two_points(rng, &c);
        wirtinger.check(case, || {
            let t = build_boundary_example(BoundaryKind::Wirtinger, &SignedTower::split(&c), p, q).or_fail()?;
            verdict(&t, true, DegenerationType::BoundaryI)
        });
    }
    b.tally(wirtinger, "allowable, type I");
    let mut unallowable = Tally::new("unallowable");
    for case in 0..cases {
        let n = rng.gen_range(2..=4);
        let t = loop {
            let labels = rng.gen_range(3..=6);
            let t = random_etale_tower(rng, n, labels);
            if t.lift().is_connected() {
                break t;
            }
        };
        let (p, q) = two_points(rng, &t.curve());
        unallowable.check(case, || {
            let g = build_boundary_example(BoundaryKind::Unallowable, &t, p, q).or_fail()?;
            verdict(&g, false, DegenerationType::BoundaryII)
        });
    }
    b.tally(unallowable, "not allowable, type II");
    let mut beauville = Tally::new("beauville");
    for case in 0..cases {
        let n = rng.gen_range(2..=4);
        let labels = rng.gen_range(3..=6);
        let (t, p, q) = random_two_point_branched(rng, n, labels);
        beauville.check(case, || {
            let g = build_boundary_example(BoundaryKind::Beauville, &t, p, q).or_fail()?;
            verdict(&g, true, DegenerationType::BoundaryIII)
        });
    }
    b.tally(beauville, "allowable, type III");
}
