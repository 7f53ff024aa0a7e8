//! Acceptance suite: runs every reproduction criterion at its stated
//! tolerance and prints one pass/fail line per criterion
//! (`cargo test --test acceptance -- --nocapture` to see the lines).

use stabrank::repro::{manifest, run_criterion, CheckOutcome};

fn run_one(id: usize) -> CheckOutcome {
    let manifest = manifest();
    let criterion = manifest
        .iter()
        .find(|c| c.id == id)
        .expect("criterion id present in the manifest");
    let outcome = run_criterion(criterion);
    println!(
        "criterion {:>2} [{}]: {} ({:.2}s) — {}",
        outcome.id,
        outcome.name,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.seconds,
        outcome.detail
    );
    outcome
}

macro_rules! criterion_test {
    ($name:ident, $id:expr) => {
        #[test]
        fn $name() {
            let outcome = run_one($id);
            assert!(outcome.passed, "criterion {}: {}", $id, outcome.detail);
        }
    };
}

criterion_test!(criterion_01_depth2_certificate_exact, 1);
criterion_test!(criterion_02_worked_slope_sequences, 2);
criterion_test!(criterion_03_greedy_sweep_floors, 3);
criterion_test!(criterion_04_psd_oracle_agreement, 4);
criterion_test!(criterion_05_shadow_hull_equality, 5);
criterion_test!(criterion_06_maximal_classification, 6);
criterion_test!(criterion_07_facets_and_combination, 7);
criterion_test!(criterion_08_graph_family_isomorphisms, 8);
criterion_test!(criterion_09_closure_rank_bounds, 9);
criterion_test!(criterion_10_threshold_ordering_and_step_bound, 10);
criterion_test!(criterion_11_discriminant_factorization, 11);
