//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values and checks its runtime budget.

use std::process::Command;
use std::time::{Duration, Instant};

use quartic::trigpoly::rat;
use quartic::validation::{self, CriterionResult};

fn run(budget_secs: f64, f: impl FnOnce() -> CriterionResult) -> CriterionResult {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    println!("{} ({:.3} s)", r.line(), elapsed.as_secs_f64());
    assert!(elapsed <= Duration::from_secs_f64(budget_secs), "criterion {} took {elapsed:?}", r.id);
    r
}

fn assert_pass(budget_secs: f64, f: impl FnOnce() -> CriterionResult) {
    let r = run(budget_secs, f);
    assert!(r.passed, "{}", r.line());
}

#[test]
fn c01_lindstedt_exact_coefficients() {
    assert_pass(1.0, validation::lindstedt_coefficients);
}

#[test]
fn c01_detects_perturbed_coefficient() {
    let r = validation::check_lindstedt_coefficients(&rat(3, 8), &rat(-20, 256), &rat(1, 32));
    println!("mutated: {}", r.line());
    assert!(!r.passed);
}

#[test]
fn c02_frequency_vs_engine() {
    assert_pass(1.0, validation::frequency_vs_engine);
}

#[test]
fn c03_series_vs_exact() {
    assert_pass(1.0, validation::series_vs_exact);
}

#[test]
fn c04_simulation_vs_exact() {
    assert_pass(30.0, validation::simulation_vs_exact);
}

#[test]
fn c05_conservation_and_convergence() {
    assert_pass(60.0, validation::conservation_and_convergence);
}

#[test]
fn c06_quantum_softening() {
    assert_pass(1.0, validation::quantum_softening);
}

#[test]
fn c07_first_order_quantum_isochronicity() {
    assert_pass(1.0, validation::first_order_quantum_isochronicity);
}

#[test]
fn c08_second_order_classical_isochronicity() {
    assert_pass(1.0, validation::second_order_classical_isochronicity);
}

#[test]
fn c09_second_order_quantum_isochronicity() {
    assert_pass(1.0, validation::second_order_quantum_isochronicity);
}

#[test]
fn c10_separatrix_closed_form() {
    assert_pass(5.0, validation::separatrix_closed_form);
}

#[test]
fn c11_bound_constants() {
    assert_pass(1.0, validation::bound_constants);
}

#[test]
fn c12_double_well_cross_check() {
    assert_pass(30.0, validation::double_well_cross_check);
}

#[test]
fn c13_turning_point_discrepancy() {
    let r = run(1.0, validation::turning_point_discrepancy);
    assert!(r.passed);
    assert!(r.note.as_deref().unwrap_or("").contains("documented discrepancy"));
}

fn invoke(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_quartic")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn c14_determinism_across_processes() {
    let start = Instant::now();
    let commands: [&[&str]; 3] = [
        &["freq", "--regime", "classical", "-m", "1", "-w", "1", "-l", "0.025", "-A", "1", "--order", "2"],
        &["sweep", "--target", "freq", "--grid", "lambda=0:0.08:9", "--grid", "A=0.5:2:4"],
        &["validate", "--json"],
    ];
    let mut ok = true;
    for argv in commands {
        let (c1, a) = invoke(argv);
        let (c2, b) = invoke(argv);
        let same = c1 == 0 && c2 == 0 && a == b && !a.is_empty();
        println!("  {} -> exit {c1}/{c2}, {} bytes, identical: {same}", argv.join(" "), a.len());
        ok &= same;
    }
    let in_process = validation::determinism(&validation::core_criteria());
    ok &= in_process.passed;
    let elapsed = start.elapsed();
    println!("{} 14 deterministic output ({:.3} s)", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    assert!(ok);
    assert!(elapsed <= Duration::from_secs(10), "{elapsed:?}");
}

#[test]
fn validate_command_exit_code_matches_report() {
    let (code, out) = invoke(&["validate"]);
    let text = String::from_utf8(out).unwrap();
    print!("{text}");
    let failed = text.lines().filter(|l| l.starts_with("FAIL")).count();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 14);
    assert_eq!(code == 0, failed == 0);
}
