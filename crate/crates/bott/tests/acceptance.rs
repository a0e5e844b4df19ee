//! Runs the ten acceptance criteria and prints one line per criterion.
//!
//! Criterion 8 is a known deviation (see `KNOWN_DEVIATIONS`): it is run
//! in full and must keep failing for the documented reason, and every
//! other criterion must pass.

use std::io::Write;

use bott::acceptance::{self, Fault, Grid, Options, Summary, KNOWN_DEVIATIONS};

/// Written to the raw stderr handle so the lines survive output capture.
fn print_lines(s: &Summary) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance, grid {:?}, seed {}", s.grid, s.seed);
    for c in &s.criteria {
        let _ = writeln!(err, "{}", c.line());
    }
}

#[test]
fn acceptance_small_grid() {
    let summary = acceptance::run(&Options::default());
    print_lines(&summary);
    assert_eq!(summary.criteria.len(), 10);
    assert_eq!(summary.failing(), KNOWN_DEVIATIONS, "unexpected failures");
    assert!(!summary.passed);
    // 16 polarizations on H_0, of which b = 2a leaves both degrees present
    let eight = &summary.criteria[7];
    assert!(eight.detail.starts_with("14 failures, first: r=0"), "{}", eight.detail);
    assert_eq!(eight.detail.matches("r=0").count(), 3, "{}", eight.detail);
}

#[test]
fn runs_are_reproducible() {
    let strip = |s: acceptance::Summary| {
        s.criteria.into_iter().map(|c| (c.id, c.passed, c.cases, c.detail)).collect::<Vec<_>>()
    };
    let opts = Options { seed: 7, ..Options::default() };
    assert_eq!(strip(acceptance::run(&opts)), strip(acceptance::run(&opts)));
}

#[test]
fn wrong_pairing_is_caught() {
    let summary = acceptance::run(&Options { fault: Some(Fault::WrongPairing), ..Options::default() });
    let failing = summary.failing();
    assert!(failing.contains(&4), "{failing:?}");
}

#[test]
#[ignore = "full grid, several minutes"]
fn acceptance_full_grid() {
    let summary = acceptance::run(&Options { grid: Grid::Full, ..Options::default() });
    print_lines(&summary);
    assert_eq!(summary.failing(), KNOWN_DEVIATIONS);
}
