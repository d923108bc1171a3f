//! Fixture builders shared by the criterion benchmarks.

use corrext_core::sampling::{random_distribution, random_tree_graph, rng, DEFAULT_SEED};
use corrext_core::{
    build_singlet_scenario, BchScenario, CompatibilityGraph, Domain, MomentConstraints,
    VariableSet,
};

/// Four-observable correlation data of the spin-pair scenario.
pub fn singlet_bch() -> BchScenario {
    build_singlet_scenario().bch_scenario().expect("builtin data is consistent")
}

/// Deterministic random tree compatibility graph over `n` variables.
pub fn random_graph(seed: u64, n: usize) -> CompatibilityGraph {
    random_tree_graph(&mut rng(seed), n)
}

/// Full moment set of one random distribution over `n` {0,1} variables.
pub fn dense_moments(n: usize) -> MomentConstraints {
    let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
    let vars = VariableSet::new(names, Domain::ZeroOne).expect("distinct names");
    random_distribution(&mut rng(DEFAULT_SEED), vars).full_moments()
}

#[cfg(test)]
mod tests {
    use super::*;
    use corrext_core::is_tree;

    #[test]
    fn fixtures_build() {
        assert!((singlet_bch().single_a(1) - 0.5).abs() < 1e-9);
        assert!(is_tree(&random_graph(1, 6)));
        assert_eq!(dense_moments(6).len(), 63);
    }
}
