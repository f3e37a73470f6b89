//! Acceptance suite: every release-gating criterion at full scale, exact
//! tolerance. Each test prints one `criterion NN (<name>): PASS` line;
//! a failing assertion marks the criterion FAIL with its evidence.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use fibrank::rank::{Backend, ZContext};
use fibrank::verify::{
    reproduce_order_table, reproduce_trajectory_table, verify_backend_equivalence,
    verify_fixed_point_characterization, verify_lcm_multiplicativity, verify_order_family,
    verify_power10_formula, verify_power2_formulas, verify_terminal_family, verify_termination,
    verify_z_upper_bound, VerificationReport,
};
use fibrank::nat;

fn ctx() -> ZContext {
    ZContext::new(Backend::Fast)
}

fn pass(id: u32, name: &str) {
    println!("criterion {id:02} ({name}): PASS");
}

fn assert_clean(report: &VerificationReport, id: u32) {
    assert!(
        report.passed,
        "criterion {id:02} FAIL: suite {} found counterexamples: {:#?}",
        report.suite, report.counterexamples
    );
}

fn fibrank_cli(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_fibrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_01_small_trajectory_table_reproduces_exactly() {
    let report = reproduce_trajectory_table(&ctx()).unwrap();
    assert_eq!(report.checked, 12, "all 12 rows compared");
    assert_clean(&report, 1);
    let cli = fibrank_cli(&["table1"]);
    assert_eq!(cli.status.code(), Some(0), "criterion 01 FAIL: table1 exit");
    pass(1, "table1 reproduction, 12 rows exact");
}

#[test]
fn criterion_02_first_n_with_order_table_reproduces_exactly() {
    let report = reproduce_order_table(10, &nat(100_000), &ctx()).unwrap();
    assert_eq!(report.checked, 10, "all 10 golden rows compared");
    assert_clean(&report, 2);
    let cli = fibrank_cli(&["table2", "--kmax", "10"]);
    assert_eq!(cli.status.code(), Some(0), "criterion 02 FAIL: table2 exit");
    pass(2, "table2 reproduction, (n, fixed point) pairs exact for k = 1..10");
}

#[test]
fn criterion_03_fast_backend_equals_oracle_to_2e4() {
    let report = verify_backend_equivalence(20_000, &ctx()).unwrap();
    assert_eq!(report.checked, 20_000);
    assert_clean(&report, 3);
    pass(3, "z_fast(n) = z_bruteforce(n) for all n in [1, 2*10^4]");
}

#[test]
fn criterion_04_fixed_point_set_to_1e6_is_exactly_both_families() {
    let report = verify_fixed_point_characterization(1_000_000, &ctx()).unwrap();
    assert_eq!(report.checked, 1_000_000);
    assert_clean(&report, 4);
    // the full expected set, frozen: {5^k} ∪ {12·5^k} up to 10^6
    assert_eq!(
        report.notes[0],
        "fixed points found: [1, 5, 12, 25, 60, 125, 300, 625, 1500, 3125, 7500, \
         15625, 37500, 78125, 187500, 390625, 937500]",
        "criterion 04 FAIL: fixed point set differs"
    );
    pass(4, "fixed points below 10^6 are exactly {5^k} union {12*5^k}");
}

#[test]
fn criterion_05_upper_bound_and_equality_set_to_1e5() {
    let report = verify_z_upper_bound(100_000, &ctx()).unwrap();
    assert_eq!(report.checked, 100_000);
    assert_clean(&report, 5);
    assert_eq!(
        report.notes[0],
        "equality set: [6, 30, 150, 750, 3750, 18750, 93750]",
        "criterion 05 FAIL: equality set differs"
    );
    pass(5, "z(n) <= 2n on [1, 10^5], equality exactly at 6*5^k");
}

#[test]
fn criterion_06_power_of_two_laws_to_a60() {
    // closed form checked on [3, 60]; iterate and order formulas on [4, 60],
    // a superset of the required [4, 40]
    let report = verify_power2_formulas(60, &ctx()).unwrap();
    assert_clean(&report, 6);
    pass(6, "z(2^a) closed form to a=60; iterate formula and order ceil(a/2)-1");
}

#[test]
fn criterion_07_power_of_ten_law_to_m24() {
    let report = verify_power10_formula(11, 24, &ctx()).unwrap();
    assert_clean(&report, 7);
    pass(7, "z^k(10^m) = 3*5^m*2^(m-2k) for m in [4, 24], 2k+2 <= m");
}

#[test]
fn criterion_08_order_family_k1_to_6_r0_to_4() {
    let report = verify_order_family(6, 4, &ctx()).unwrap();
    assert_eq!(report.checked, 6 * 5);
    assert_clean(&report, 8);
    pass(8, "order(5^r * 10^(2k+2)) = k for k in [1, 6], r in [0, 4]");
}

#[test]
fn criterion_09_terminal_family_and_step_counts() {
    let report = verify_terminal_family(20, 6, &ctx()).unwrap();
    // 20 terminals plus two step-count identities per b
    assert_eq!(report.checked, 7 * 22);
    assert_clean(&report, 9);
    pass(9, "terminal(2^a * 5^b) = 12*5^b; z^2(4*5^b) = z^4(2*5^b) = 12*5^b");
}

#[test]
fn criterion_10_coprime_split_to_5000_k10() {
    let report = verify_lcm_multiplicativity(5_000, 10, &ctx()).unwrap();
    assert_clean(&report, 10);
    pass(10, "z^k(ab) = lcm(z^k(a), z^k(b)) for coprime a,b > 1, ab <= 5000, k <= 10");
}

#[test]
fn criterion_11_termination_witness_to_1e5() {
    let report = verify_termination(100_000, 200, &ctx()).unwrap();
    assert_eq!(report.checked, 100_000);
    assert_clean(&report, 11);
    println!("criterion 11 detail: {}", report.notes[0]);
    assert_eq!(
        report.notes[0], "maximum observed order 10, first at n = 59833",
        "criterion 11 FAIL: unexpected maximum order"
    );
    pass(11, "every n <= 10^5 reaches a fixed point within 200 iterations");
}

#[test]
fn criterion_12_sweep_bytes_identical_for_1_and_8_workers() {
    let single = fibrank_cli(&["sweep", "--from", "1", "--to", "10000", "--jobs", "1"]);
    let multi = fibrank_cli(&["sweep", "--from", "1", "--to", "10000", "--jobs", "8"]);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(multi.status.code(), Some(0));
    assert!(!single.stdout.is_empty());
    assert_eq!(
        single.stdout, multi.stdout,
        "criterion 12 FAIL: sweep output depends on worker count"
    );
    pass(12, "sweep 1..10000 byte-identical for --jobs 1 vs --jobs 8");
}
