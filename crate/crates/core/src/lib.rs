//! Spectral toolkit for half-line Schrödinger operators with derivative-coupling
//! (δ′-type) point interactions.
//!
//! The operator acts as −f″ + q(x)f on [0, ∞) with f′(0) = 0, subject at each
//! interaction site x_k to derivative continuity together with a value jump
//! proportional to the derivative, f(x_k+) − f(x_k−) = β_k f′(x_k). The crate
//! models the data triple (X, β, q), evaluates the associated quadratic form,
//! checks semiboundedness/discreteness/essential-spectrum criteria as
//! three-valued verdicts, and computes truncated spectra by three independent
//! engines (interface-matrix shooting, P1 Galerkin with inertia bisection, and
//! a dense finite-difference oracle).

pub mod config;
pub mod criteria;
pub mod eigensolver;
pub mod forms;
pub mod model;
pub mod neumann;
pub mod scenarios;

pub use config::SpecConfig;
pub use criteria::{CriterionReport, Verdict, VerdictStatus};
pub use eigensolver::{Bc, Engine, SpectralResult, TruncatedProblem};
pub use forms::{FormBreakdown, PiecewiseFunction, TestFunctionKind};
pub use model::{Coupling, ExtReal, ModelError, OperatorSpec};
pub use neumann::{CellSpectrum, EssSpectrumModel};
pub use scenarios::{ScenarioParams, ScenarioReport};
