//! Decides whether partially measured correlation data between binary
//! observables admits a single classical probability space, constructs
//! explicit joint distributions over tree-shaped compatibility graphs, and
//! computes the exact feasible range of correlations that no experiment can
//! measure directly.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`probability`] — finite probability spaces over binary variables:
//!   atoms, marginals, moments, conditioning, and the inversion between a
//!   full moment set and its unique distribution.
//! * [`quantum`] — just enough complex linear algebra to generate quantum
//!   predictions: tensor products, Pauli operators, expectations, and joint
//!   outcome distributions for commuting yes/no observables.
//! * [`tree`] — gluing pairwise (or blockwise) distributions along a
//!   tree-shaped compatibility graph into one joint distribution.
//! * [`representability`] — closed-form feasible intervals for an
//!   unmeasurable correlation, exact LP ranges over the atom simplex, the
//!   eight Fine inequalities, and the combined four-observable check.
//! * [`scenarios`] — canonical builders for the singlet, Hardy, and GHSZ
//!   settings, the two explicit GHSZ classical models, and the GHSZ parity
//!   analysis.
//! * [`sampling`] — seeded randomized stress suites shared by the test
//!   harness and the CLI `selftest` command.

use std::sync::atomic::{AtomicU64, Ordering};

pub mod error;
pub mod probability;
pub mod quantum;
pub mod representability;
pub mod sampling;
pub mod scenarios;
mod simplex;
pub mod tree;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
pub use probability::{
    moments_to_distribution, Atom, Distribution, Domain, MomentConstraints, VariableSet,
};
pub use quantum::{
    expectation, joint_distribution, pauli, tensor, ComplexMatrix, Context, Convention,
    PauliAxis, PureState, YesNoObservable,
};
pub use representability::{
    bch_check, bell_wigner_interval, fine_inequalities, fine_satisfied, lp_feasible,
    lp_feasible_distribution, lp_interval, BchScenario, EmptyKind, Interval,
    RepresentabilityReport,
};
pub use scenarios::{
    analyze_ghsz, build_ghsz_model, build_ghsz_scenario, build_hardy_scenario,
    build_singlet_scenario, default_hardy_scenario, ghsz_forced_four_correlation, GhszAnalysis,
    GhszModel, Scenario, ScenarioSource, HARDY_ANGLE_L1, HARDY_ANGLE_L2, HARDY_ANGLE_R1,
    HARDY_ANGLE_R2,
};
pub use tree::{extend_tree, glue, is_tree, CompatibilityGraph, GlueResult, GraphEdge};

/// Default numeric tolerance: every validity check, verdict, and comparison
/// in the crate treats quantities within this distance as equal.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE: AtomicU64 = AtomicU64::new(f64::to_bits(DEFAULT_TOLERANCE));

/// Current global tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE.load(Ordering::Relaxed))
}

/// Replaces the global tolerance. Intended to be called once at process
/// startup (the CLI maps `--tolerance` here); operations are otherwise pure.
///
/// # Panics
/// Panics if `t` is not a finite positive number.
pub fn set_tolerance(t: f64) {
    assert!(t.is_finite() && t > 0.0, "tolerance must be finite and positive");
    TOLERANCE.store(t.to_bits(), Ordering::Relaxed);
}
