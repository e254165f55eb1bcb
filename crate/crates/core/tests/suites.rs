use prymkit::suites::{run_suite, SuiteConfig, SUITES};

fn small(suite: &str, seed: u64) -> SuiteConfig {
    let cases = match suite {
        "f2-identities" | "fano-diagram" | "delpezzo-census" | "wd4-lattice" => None,
        _ => Some(30),
    };
    SuiteConfig { seed, cases }
}

#[test]
fn every_suite_passes_on_a_small_run() {
    for suite in SUITES {
        let report = run_suite(suite, &small(suite, 7)).unwrap();
        assert!(report.passed(), "{report}");
        assert!(!report.checks.is_empty(), "{suite} ran no checks");
    }
}

#[test]
fn reports_depend_only_on_the_seed() {
    for suite in ["recillas", "triality", "allowability"] {
        let a = run_suite(suite, &small(suite, 11)).unwrap().to_string();
        let b = run_suite(suite, &small(suite, 11)).unwrap().to_string();
        assert_eq!(a, b);
    }
}

#[test]
fn report_lines_are_sorted_and_summarised() {
    let report = run_suite("bigonal-symmetry", &small("bigonal-symmetry", 2)).unwrap();
    let text = report.to_string();
    let lines: Vec<&str> = text.lines().collect();
    let ids: Vec<&str> = lines[..lines.len() - 1].iter().map(|l| l.split(' ').nth(1).unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(lines.last().unwrap().starts_with("summary bigonal-symmetry seed=2 cases=30 pass="));
}

#[test]
fn bad_requests_are_rejected() {
    assert!(run_suite("no-such-suite", &SuiteConfig::default()).is_err());
    assert!(run_suite("recillas", &SuiteConfig { seed: 1, cases: Some(0) }).is_err());
}
