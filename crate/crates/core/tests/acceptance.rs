//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line; failures also list their exceptions.

use std::sync::OnceLock;

use superder::suite::{
    criterion_determinism, default_matrix, run_core, CriterionReport, SuiteConfig, SuiteReport,
};

fn report() -> &'static SuiteReport {
    static REPORT: OnceLock<SuiteReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let matrix = default_matrix().expect("default matrix builds");
        run_core(&matrix, &SuiteConfig::default())
    })
}

fn judge(c: &CriterionReport) {
    println!("{}", c.summary_line());
    for n in &c.notices {
        println!("  notice: {n}");
    }
    for e in &c.exceptions {
        println!(
            "  exception: {} / {}: {}",
            e.entry,
            e.check,
            e.witness
                .as_ref()
                .map(|w| w.to_string())
                .or_else(|| e.detail.clone())
                .unwrap_or_default()
        );
    }
    assert!(c.passed, "criterion {} failed: {}", c.id, c.name);
}

fn criterion(id: u8) {
    judge(report().criterion(id).expect("criterion present"));
}

#[test]
fn criterion_1_component_classification() {
    criterion(1);
}

#[test]
fn criterion_2_two_torsion_equivalence() {
    criterion(2);
}

#[test]
fn criterion_3_triangular_decomposition() {
    criterion(3);
}

#[test]
fn criterion_4_faithful_corner_derivations() {
    criterion(4);
}

#[test]
fn criterion_5_inner_degree_one() {
    criterion(5);
}

#[test]
fn criterion_6_super_biderivation_decomposition() {
    criterion(6);
}

#[test]
fn criterion_7_isomorphisms() {
    criterion(7);
}

#[test]
fn criterion_8_mutation_soundness() {
    criterion(8);
}

#[test]
fn criterion_9_determinism_across_workers() {
    let matrix = default_matrix().expect("default matrix builds");
    judge(&criterion_determinism(&matrix, &SuiteConfig::default()));
}
