//! Shared fixtures for the engine benchmarks.

use dspec_core::config::builders;
use dspec_core::{Bc, OperatorSpec, TruncatedProblem};

/// Periodic lattice with weakening couplings, truncated to `count` cells.
pub fn lattice_problem(count: usize) -> TruncatedProblem {
    let spec = OperatorSpec::build(builders::kronig_penney(1.0, 0.0, 1.0, count))
        .expect("valid fixture");
    TruncatedProblem::new(&spec, Bc::Neumann)
}
