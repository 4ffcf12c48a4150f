mod common;

use common::*;
use freequot_core::report::{run_verification_suite, Status, VerificationReport};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseResult, TestRng, TestRunner};

const CRITERIA: [(u32, &str, &[&str]); 13] = [
    (1, "group classification of the order-16 built-ins", &["group-classification"]),
    (
        2,
        "fixed loci: 48 points in three coordinate sets, finite everywhere",
        &["fixed-loci-partition", "fixed-loci-dimension"],
    ),
    (
        3,
        "holomorphic Lefschetz sums equal 1",
        &["lefschetz-all-elements", "lefschetz-z2-terms"],
    ),
    (
        4,
        "linear system L: rank 6, 64 base points, Q4 smooth there",
        &["base-points-rank", "base-points-vanishing", "base-points-q4-gradient"],
    ),
    (
        5,
        "freeness: Q4 nonzero on Fix(G), Qi common eigenvectors",
        &["freeness-q4-fixed-points", "freeness-eigenvectors"],
    ),
    (
        6,
        "no invariant divisor in |O_X(H)| for Z8 x Z2 and Z4 x Z4",
        &["invariant-divisor-anticommute", "invariant-divisor-scan"],
    ),
    (
        7,
        "regular character, eigenspace dimensions 1 and 6",
        &[
            "representation-character",
            "representation-fano-eigenspace",
            "representation-quadric-eigenspace",
        ],
    ),
    (
        8,
        "Fano V: singular points and smoothness along the base locus",
        &["fano-singular-points", "fano-base-point-smoothness"],
    ),
    (
        9,
        "intersection numbers: chi(Y) = -128, H^4 = 24, 2H.H^3 = 48",
        &["intersection-euler", "intersection-degrees"],
    ),
    (10, "Hodge table for all built-in groups", &["hodge-table"]),
    (
        11,
        "cohomology bookkeeping through the exact sequences",
        &["cohomology-kunneth", "cohomology-chase"],
    ),
    (12, "surface invariants for |G| = 16", &["surface-invariants"]),
    (
        13,
        "full-support obstruction for sigma = id, (12), (12)(34)",
        &["obstruction-sigma-id", "obstruction-sigma-12", "obstruction-sigma-12-34"],
    ),
];

fn criterion_line(report: &VerificationReport, ids: &[&str]) -> (bool, String) {
    let mut notes = Vec::new();
    let mut pass = true;
    for id in ids {
        let Some(c) = report.check(id) else {
            return (false, format!("check {id} missing"));
        };
        if c.status != Status::Pass {
            pass = false;
            let why = c.counterexample.clone().or_else(|| c.error.clone()).unwrap_or_default();
            notes.push(format!("{id}: {} ({why})", c.status.as_str()));
        }
    }
    (pass, notes.join("; "))
}

fn run_property<S>(name: &str, cases: u32, strategy: S, test: impl Fn(S::Value) -> TestCaseResult) -> Option<String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).err().map(|e| format!("{name}: {e}"))
}

fn property_suites() -> Vec<String> {
    let rows = proptest::collection::vec(proptest::collection::vec(cyclo(), 4), 2..4);
    [
        run_property("field axioms", 256, (cyclo(), cyclo(), cyclo()), |(a, b, c)| {
            field_axioms(&a, &b, &c)
        }),
        run_property(
            "kernel exactness and rank invariance",
            128,
            (rows, invertible_mat2()),
            |(rows, p)| kernel_and_rank(rows, &p),
        ),
        run_property(
            "group axioms on closures",
            128,
            (builtin_name(), proptest::array::uniform3(0usize..64)),
            |(name, picks)| group_axioms(name, picks),
        ),
        run_property("conjugation invariance", 100, (builtin_name(), product_auto()), |(name, k)| {
            conjugation_invariance(name, &k)
        }),
        run_property(
            "pullback multiplicativity",
            128,
            (lifted_auto(), lifted_auto(), poly([1, 2, 0, 1]), poly([1, 0, 2, 1])),
            |(g, h, p, q)| pullback_multiplicative(&g, &h, &p, &q),
        ),
    ]
    .into_iter()
    .flatten()
    .collect()
}

#[test]
fn acceptance() {
    let report = run_verification_suite(&[]);
    let mut failed = Vec::new();
    for (n, title, ids) in CRITERIA {
        let (pass, notes) = criterion_line(&report, ids);
        let verdict = if pass { "PASS" } else { "FAIL" };
        let suffix = if notes.is_empty() { String::new() } else { format!(" -- {notes}") };
        println!("criterion {n:2} [{verdict}] {title} (tolerance: exact){suffix}");
        if !pass {
            failed.push(n);
        }
    }
    let prop_failures = property_suites();
    let verdict = if prop_failures.is_empty() { "PASS" } else { "FAIL" };
    let suffix = if prop_failures.is_empty() {
        String::new()
    } else {
        format!(" -- {}", prop_failures.join("; "))
    };
    println!("criterion 14 [{verdict}] property suites, 100 random conjugators (tolerance: zero failures){suffix}");
    if !prop_failures.is_empty() {
        failed.push(14);
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
