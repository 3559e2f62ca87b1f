mod common;

use common::corpus;

#[test]
fn corpus_has_twenty_integrals() {
    assert_eq!(corpus::run().len(), 20);
}

#[test]
fn error_estimates_bound_actual_error() {
    for case in corpus::run() {
        assert!(
            case.honest(),
            "{}: |error| = {:e}, estimate = {:e}, converged = {}",
            case.name,
            case.discrepancy,
            case.err_estimate,
            case.converged
        );
    }
}
