//! Acceptance suite: one test per release criterion. Each prints its
//! pass/fail line (visible with `--nocapture`) and asserts the outcome.
//! `schreier-ising verify all` runs the same checks from the CLI.

use schreier_ising::acceptance::run_criterion;

fn run(id: u32) {
    let outcome = run_criterion(id).expect("criterion should be runnable");
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}\n{}", outcome.line(), outcome.detail);
}

#[test]
fn criterion_01_polygon_count_laws() {
    run(1);
}

#[test]
fn criterion_02_oracle_formula_equality() {
    run(2);
}

#[test]
fn criterion_03_closed_form_vs_recursion() {
    run(3);
}

#[test]
fn criterion_04_corner_path_coset() {
    run(4);
}

#[test]
fn criterion_05_high_temperature_expansion() {
    run(5);
}

#[test]
fn criterion_06_renormalization() {
    run(6);
}

#[test]
fn criterion_07_thermodynamic_limits() {
    run(7);
}

#[test]
fn criterion_08_statistics_tables() {
    run(8);
}

#[test]
fn criterion_09_normality_diagnostics() {
    run(9);
}

#[test]
fn criterion_10_fisher_correspondence() {
    run(10);
}

#[test]
fn criterion_11_cross_labeling_consistency() {
    run(11);
}
