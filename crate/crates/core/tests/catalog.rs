use toric_lg::constructions::{run_all, run_example, EXAMPLES};
use toric_lg::Execution;

#[test]
fn every_example_passes() {
    let reports = run_all(Execution::Parallel);
    assert_eq!(reports.len(), EXAMPLES.len());
    for r in &reports {
        for c in &r.checks {
            assert!(c.passed, "{}: {} ({})", r.name, c.label, c.detail);
        }
    }
}

#[test]
fn sequential_runner_matches() {
    let a = run_example("cubic3").unwrap();
    let b = run_all(Execution::Sequential).into_iter().find(|r| r.name == "cubic3").unwrap();
    assert_eq!(a, b);
}
