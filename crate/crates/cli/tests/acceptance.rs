//! The acceptance criteria, run against the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use prymkit::cover::SignedTower;
use prymkit::instances::random_cover_with_group;
use prymkit::polygonal::direct_image;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prymkit(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_prymkit")).args(args).output().expect("binary runs");
    (out, start.elapsed())
}

fn sample(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "samples", name].iter().collect();
    path.to_string_lossy().into_owned()
}

/// Runs a suite and returns its stdout after checking exit status and budget.
fn verify(args: &[&str], budget: Duration) -> String {
    let (out, elapsed) = prymkit(&[&["verify"], args].concat());
    let stdout = String::from_utf8(out.stdout).expect("utf-8 report");
    assert!(out.status.success(), "{args:?} failed:\n{stdout}");
    assert!(elapsed < budget, "{args:?} took {elapsed:?}, budget {budget:?}");
    eprintln!("{args:?}: {elapsed:.2?} (budget {budget:?})");
    stdout
}

fn line<'a>(report: &'a str, id: &str) -> &'a str {
    let prefix = format!("PASS {id} ");
    report.lines().find(|l| l.starts_with(&prefix)).unwrap_or_else(|| panic!("no passing {id}:\n{report}"))
}

/// The number of cases in a "k/k cases" detail.
fn cases(report: &str, id: &str) -> usize {
    let l = line(report, id);
    let field = l.split(' ').nth(2).expect("detail");
    let (done, total) = field.split_once('/').expect("k/k");
    assert_eq!(done, total, "{l}");
    total.parse().expect("count")
}

const SECOND: Duration = Duration::from_secs(1);

#[test]
fn criterion_01_recillas_genus_relation() {
    let r = verify(&["--suite", "recillas", "--seed", "1"], 10 * SECOND);
    assert!(cases(&r, "recillas/genus-relation") >= 200);
    let range = line(&r, "recillas/genus-relation").rsplit("..=").next().unwrap();
    assert!(range.parse::<i64>().unwrap() <= 12);
}

#[test]
fn criterion_02_recillas_bijection() {
    let r = verify(&["--suite", "recillas", "--seed", "2"], 30 * SECOND);
    assert!(cases(&r, "recillas/forward-after-inverse") >= 200);
    assert!(cases(&r, "recillas/inverse-after-forward") >= 200);
}

#[test]
fn criterion_03_bigonal_involution_and_branch_exchange() {
    let r = verify(&["--suite", "bigonal-symmetry", "--seed", "3"], 30 * SECOND);
    assert!(cases(&r, "bigonal-symmetry/involution") >= 200);
    assert!(line(&r, "bigonal-symmetry/local-cases").ends_with("seen i,ii,iii,iv,v,vi"));
    let r = verify(&["--suite", "branch-exchange", "--seed", "3"], 30 * SECOND);
    assert!(cases(&r, "branch-exchange/exchange") >= 200);
    assert!(line(&r, "branch-exchange/local-cases").ends_with("seen i,ii,iii,iv,v,vi"));
}

#[test]
fn criterion_04_tetragonal_triality() {
    let r = verify(&["--suite", "triality", "--seed", "7", "--cases", "100"], 60 * SECOND);
    assert!(cases(&r, "triality/triality") >= 100);
    assert!(r.ends_with("fail=0\n"));
}

#[test]
fn criterion_05_split_direct_image_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_cover_with_group(&mut rng, 4, 5, 24);
    let start = Instant::now();
    let mut degrees = direct_image(&SignedTower::split(&c)).unwrap().component_degrees();
    let elapsed = start.elapsed();
    degrees.sort_unstable();
    assert_eq!(degrees, [1, 1, 4, 4, 6]);
    assert!(elapsed < SECOND, "{elapsed:?}");
    let r = verify(&["--suite", "local-pictures", "--seed", "5"], 30 * SECOND);
    line(&r, "local-pictures/split-direct-image");
}

#[test]
fn criterion_06_genus_shadows() {
    let r = verify(&["--suite", "genus-shadows", "--seed", "6"], 30 * SECOND);
    assert!(cases(&r, "genus-shadows/tetragonal-genus") >= 200);
    assert!(cases(&r, "genus-shadows/tetragonal-prym") >= 200);
    assert!(cases(&r, "genus-shadows/bigonal-prym") >= 200);
}

#[test]
fn criterion_07_bielliptic_structure() {
    let r = verify(&["--suite", "bielliptic", "--seed", "7"], 60 * SECOND);
    assert!(cases(&r, "bielliptic/cartesian-input") >= 50);
    assert!(cases(&r, "bielliptic/non-cartesian-input") >= 50);
}

#[test]
fn criterion_08_f2_identities() {
    let r = verify(&["--suite", "f2-identities"], 60 * SECOND);
    for id in [
        "polarization",
        "arf-difference-pairing",
        "descent-exact-sequence",
        "descent-symplectic",
        "descent-form-coset",
        "descent-orthogonal",
    ] {
        line(&r, &format!("f2-identities/{id}"));
    }
    for (g, even) in [(1, 3), (2, 10), (3, 36)] {
        let l = line(&r, &format!("f2-identities/parity-counts-g{g}"));
        assert!(l.contains(&format!("({even}, ")), "{l}");
    }
}

#[test]
fn criterion_09_fano_diagram() {
    let r = verify(&["--suite", "fano-diagram"], 5 * SECOND);
    assert!(line(&r, "fano-diagram/summary").ends_with("solutions=7 orbit=1 labels=4T/3Q/6C"));
    line(&r, "fano-diagram/q-collinear");
}

#[test]
fn criterion_10_wd4_lattice() {
    let r = verify(&["--suite", "wd4-lattice"], 5 * SECOND);
    assert!(line(&r, "wd4-lattice/orders").contains("[Some(192), Some(48), Some(24), Some(64), Some(16), Some(32)]"));
    assert!(line(&r, "wd4-lattice/indices").contains("(Some(12), Some(3))"));
}

#[test]
fn criterion_11_delpezzo_census() {
    let r = verify(&["--suite", "delpezzo-census"], 60 * SECOND);
    assert!(line(&r, "delpezzo-census/summary").ends_with("lines27=27 tritangent=45 doublesix=36 weyl=51840 stab=1920"));
    assert!(line(&r, "delpezzo-census/line-counts").contains("16, 27]"));
    assert!(line(&r, "delpezzo-census/incidence-r6-regular").ends_with("{10}"));
    assert!(line(&r, "delpezzo-census/line-stabilizer-index").ends_with(" 27"));
    assert!(line(&r, "delpezzo-census/mark-classification").ends_with("(1, 10, 16)"));
    assert!(line(&r, "delpezzo-census/nodal-counts").ends_with("(6, 15)"));
    line(&r, "delpezzo-census/nodal-s6-equivariant");
}

#[test]
fn criterion_12_allowability() {
    let r = verify(&["--suite", "allowability", "--seed", "12"], 10 * SECOND);
    for id in ["wirtinger", "unallowable", "beauville"] {
        assert!(cases(&r, &format!("allowability/{id}")) >= 50);
    }
}

#[test]
fn criterion_13_determinism() {
    let args = ["verify", "--suite", "all", "--seed", "13", "--cases", "40"];
    let (a, _) = prymkit(&args);
    let (b, _) = prymkit(&args);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cover_info_on_the_samples() {
    let (out, _) = prymkit(&["cover", "info", &sample("etale-genus2.tower")]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("genus C=2, genus C~=3, etale: yes"));
    let (out, _) = prymkit(&["cover", "info", &sample("wirtinger.tower")]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("allowable: yes, type: ∂I"));
    let (out, _) = prymkit(&["cover", "info", &sample("bad-product.tower")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual (2 3)"));
}

#[test]
fn construct_writes_towers_and_tags() {
    let dir = std::env::temp_dir().join(format!("prymkit-construct-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prefix = dir.join("out");
    let prefix = prefix.to_str().unwrap();
    let (out, _) = prymkit(&["construct", "--kind", "tetragonal", &sample("etale-tetragonal.tower"), "-o", prefix]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for suffix in [".0.tower", ".1.tower", ".tags"] {
        assert!(std::path::Path::new(&format!("{prefix}{suffix}")).exists());
    }
    let first = format!("{prefix}.0.tower");
    let (out, _) = prymkit(&["construct", "--kind", "tetragonal", &first, "-o", &format!("{prefix}.again")]);
    assert!(out.status.success());
    let (out, _) = prymkit(&["construct", "--kind", "bigonal", &sample("etale-genus2.tower"), "-o", prefix]);
    assert!(out.status.success());
    let tags = std::fs::read_to_string(format!("{prefix}.tags")).unwrap();
    assert_eq!(tags.lines().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(prymkit(&["verify", "--suite", "nope"]).0.status.code(), Some(2));
    assert_eq!(prymkit(&["verify", "--suite", "recillas", "--cases", "0"]).0.status.code(), Some(2));
    assert_eq!(prymkit(&["lines", "--blowups", "7"]).0.status.code(), Some(2));
    assert_eq!(prymkit(&["frobnicate"]).0.status.code(), Some(2));
    let (out, _) = prymkit(&["--version"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("prymkit "));
}

#[test]
fn other_commands_report() {
    let (out, _) = prymkit(&["f2", "--genus", "3", "--enumerate-theta"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("even 36, odd 28"));
    let (out, _) = prymkit(&["diagram", "--fano-solve", "--require-t"]);
    assert!(String::from_utf8_lossy(&out.stdout).ends_with("solutions=7 orbits=1\n"));
    let dot = std::env::temp_dir().join(format!("prymkit-lines-{}.dot", std::process::id()));
    let (out, _) = prymkit(&["lines", "--blowups", "6", "--nodal", "--segre", "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -- ").count(), 27 * 10 / 2);
    std::fs::remove_file(&dot).unwrap();
}
