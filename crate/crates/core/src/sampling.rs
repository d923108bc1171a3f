//! Seeded random generators for distributions, tree-shaped compatibility
//! graphs, and correlation scenarios, plus the randomized self-checks that
//! cross-validate the independent implementations against each other.
//!
//! Every generator takes an explicit RNG so that all randomized results are
//! reproducible from a seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::probability::{
    moments_to_distribution, Distribution, Domain, MomentConstraints, VariableSet,
};
use crate::representability::{
    bch_check, bell_wigner_interval, lp_feasible, lp_interval, BchScenario,
};
use crate::tolerance;
use crate::tree::{extend_tree, CompatibilityGraph, GraphEdge};

/// Seed used by the self-test suite when none is given.
pub const DEFAULT_SEED: u64 = 0xCAFE_BABE;

/// Deterministic RNG for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random weights, normalized to a distribution.
pub fn random_distribution<R: Rng>(rng: &mut R, vars: VariableSet) -> Distribution {
    let raw: Vec<f64> = (0..vars.atom_count()).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    Distribution::new(vars, weights).expect("normalized non-negative weights")
}

/// A random tree-shaped compatibility graph over `n_vars` variables
/// (at least 2), whose edge distributions are marginals of one hidden joint
/// distribution — so a consistent extension always exists.
pub fn random_tree_graph<R: Rng>(rng: &mut R, n_vars: usize) -> CompatibilityGraph {
    assert!(n_vars >= 2, "a tree graph needs at least two variables");
    let domain = if rng.random_bool(0.5) { Domain::ZeroOne } else { Domain::PlusMinus };
    let names: Vec<String> = (0..n_vars).map(|i| format!("V{i}")).collect();
    let global = random_distribution(
        rng,
        VariableSet::new(names.clone(), domain).expect("distinct names"),
    );

    let block_count = rng.random_range(2..=n_vars);
    let mut blocks: Vec<Vec<String>> = vec![Vec::new(); block_count];
    for (j, name) in names.iter().enumerate() {
        let block = if j < block_count { j } else { rng.random_range(0..block_count) };
        blocks[block].push(name.clone());
    }
    let nodes: Vec<VariableSet> = blocks
        .iter()
        .map(|block| VariableSet::new(block.clone(), domain).expect("distinct names"))
        .collect();

    let mut edges = Vec::with_capacity(block_count - 1);
    for v in 1..block_count {
        let u = rng.random_range(0..v);
        let union: Vec<&str> = blocks[u]
            .iter()
            .chain(blocks[v].iter())
            .map(String::as_str)
            .collect();
        let dist = global.marginalize(&union).expect("names come from the global set");
        edges.push(GraphEdge { a: u, b: v, dist });
    }
    CompatibilityGraph::new(nodes, edges).expect("blocks are disjoint and edges cover them")
}

/// Random four-observable correlation data with every pair moment drawn
/// uniformly from its valid range given the singles.
pub fn random_bch_scenario<R: Rng>(rng: &mut R) -> BchScenario {
    let a = [rng.random::<f64>(), rng.random::<f64>()];
    let b = [rng.random::<f64>(), rng.random::<f64>()];
    let mut ab = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let lo = (a[i] + b[j] - 1.0).max(0.0);
            let hi = a[i].min(b[j]);
            ab[i][j] = lo + rng.random::<f64>() * (hi - lo);
        }
    }
    BchScenario::from_values(a[0], a[1], b[0], b[1], ab)
        .expect("sampled inside the realizable region")
}

/// Random five-moment data over `A1, A2, B` (singles plus the two pairs
/// with `B`), each pair drawn from its valid range.
pub fn random_three_var_moments<R: Rng>(rng: &mut R) -> MomentConstraints {
    let vars = VariableSet::new(["A1", "A2", "B"], Domain::ZeroOne).expect("distinct names");
    let a1 = rng.random::<f64>();
    let a2 = rng.random::<f64>();
    let b = rng.random::<f64>();
    let mut m = MomentConstraints::new(vars);
    m.insert(&["A1"], a1).expect("in range");
    m.insert(&["A2"], a2).expect("in range");
    m.insert(&["B"], b).expect("in range");
    for (name, single) in [("A1", a1), ("A2", a2)] {
        let lo = (single + b - 1.0).max(0.0);
        let hi = single.min(b);
        let pair = lo + rng.random::<f64>() * (hi - lo);
        m.insert(&[name, "B"], pair).expect("in range");
    }
    m
}

/// Result of one randomized check: how many cases ran and the worst error
/// observed (for checks where an error metric applies).
#[derive(Clone, Copy, Debug)]
pub struct SuiteOutcome {
    pub cases: usize,
    pub max_error: f64,
}

/// Extends random tree graphs and verifies that the joint distribution
/// reproduces every edge distribution as a marginal.
pub fn check_tree_glue_marginals(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut max_error = 0.0f64;
    for case in 0..cases {
        let n = rng.random_range(2..=6);
        let graph = random_tree_graph(&mut rng, n);
        let extension = extend_tree(&graph)
            .map_err(|e| Error::Internal(format!("case {case}: extension failed: {e}")))?;
        for (idx, edge) in graph.edges().iter().enumerate() {
            let marginal = extension.joint.marginal_onto(edge.dist.vars())?;
            let diff = marginal.max_abs_diff(&edge.dist)?;
            max_error = max_error.max(diff);
            if diff > tolerance() {
                return Err(Error::Internal(format!(
                    "case {case}: edge {idx} marginal off by {diff}"
                )));
            }
        }
    }
    Ok(SuiteOutcome { cases, max_error })
}

/// Round-trips distributions through their full moment sets: exhaustively
/// (point masses, uniform, and sampled tables) for up to 4 variables in
/// both conventions, plus `random_cases` sampled 6-variable tables.
pub fn check_moment_round_trip(seed: u64, random_cases: usize) -> Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut outcome = SuiteOutcome { cases: 0, max_error: 0.0 };
    let run = |d: &Distribution, outcome: &mut SuiteOutcome| -> Result<()> {
        let m = d.full_moments();
        let back = moments_to_distribution(&m)
            .map_err(|e| Error::Internal(format!("round trip failed: {e} for {d:?}")))?;
        let diff = back.max_abs_diff(d)?;
        outcome.max_error = outcome.max_error.max(diff);
        if diff > tolerance() {
            return Err(Error::Internal(format!(
                "round trip off by {diff} for {d:?}"
            )));
        }
        outcome.cases += 1;
        Ok(())
    };
    for domain in [Domain::ZeroOne, Domain::PlusMinus] {
        for n in 1..=4usize {
            let vars = VariableSet::new((0..n).map(|i| format!("V{i}")), domain)?;
            for idx in 0..vars.atom_count() {
                let mut weights = vec![0.0; vars.atom_count()];
                weights[idx] = 1.0;
                run(&Distribution::new(vars.clone(), weights)?, &mut outcome)?;
            }
            run(&Distribution::uniform(vars.clone()), &mut outcome)?;
            for _ in 0..25 {
                run(&random_distribution(&mut rng, vars.clone()), &mut outcome)?;
            }
        }
    }
    for _ in 0..random_cases {
        let domain = if rng.random_bool(0.5) { Domain::ZeroOne } else { Domain::PlusMinus };
        let vars = VariableSet::new((0..6).map(|i| format!("V{i}")), domain)?;
        run(&random_distribution(&mut rng, vars.clone()), &mut outcome)?;
    }
    Ok(outcome)
}

/// Runs the full representability check on random four-observable data and
/// verifies that the interval intersection, the Fine inequalities, and
/// direct LP feasibility of all eight moments reach the same verdict.
pub fn check_verdict_agreement(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = rng(seed);
    for case in 0..cases {
        let scenario = random_bch_scenario(&mut rng);
        // bch_check itself cross-checks the intervals against the Fine
        // residuals and fails loudly on any split verdict.
        let report = bch_check(&scenario).map_err(|e| {
            Error::Internal(format!("case {case}: {e}; moments {:?}", scenario.moments()))
        })?;
        let feasible = lp_feasible(scenario.moments())?;
        if feasible != report.representable {
            return Err(Error::Internal(format!(
                "case {case}: LP feasibility says {feasible}, intervals say {}; moments {:?}",
                report.representable,
                scenario.moments()
            )));
        }
    }
    Ok(SuiteOutcome { cases, max_error: 0.0 })
}

/// Compares the closed-form interval against the LP interval on random
/// three-variable data.
pub fn check_interval_closed_form(seed: u64, cases: usize) -> Result<SuiteOutcome> {
    let mut rng = rng(seed);
    let mut max_error = 0.0f64;
    for case in 0..cases {
        let m = random_three_var_moments(&mut rng);
        let closed = bell_wigner_interval(&m)?;
        if closed.empty {
            return Err(Error::Internal(format!(
                "case {case}: closed form empty on realizable data {m:?}"
            )));
        }
        let lp = lp_interval(&["A1", "A2"], &m)?;
        if lp.empty {
            return Err(Error::Internal(format!(
                "case {case}: LP infeasible on realizable data {m:?}"
            )));
        }
        let err = (closed.lo - lp.lo).abs().max((closed.hi - lp.hi).abs());
        max_error = max_error.max(err);
        if err > tolerance() {
            return Err(Error::Internal(format!(
                "case {case}: closed form {closed:?} vs LP {lp:?} on {m:?}"
            )));
        }
    }
    Ok(SuiteOutcome { cases, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::is_tree;

    #[test]
    fn random_tree_graphs_are_trees() {
        let mut r = rng(11);
        for _ in 0..50 {
            let n = r.random_range(2..=6);
            let g = random_tree_graph(&mut r, n);
            assert!(is_tree(&g));
            assert!(!g.edges().is_empty());
        }
    }

    #[test]
    fn tree_glue_suite_passes_small_run() {
        let outcome = check_tree_glue_marginals(DEFAULT_SEED, 200).unwrap();
        assert_eq!(outcome.cases, 200);
        assert!(outcome.max_error <= 1e-9);
    }

    #[test]
    fn round_trip_suite_passes_small_run() {
        let outcome = check_moment_round_trip(DEFAULT_SEED, 50).unwrap();
        assert!(outcome.cases > 250);
        assert!(outcome.max_error <= 1e-9);
    }

    #[test]
    fn verdict_agreement_suite_passes_small_run() {
        let outcome = check_verdict_agreement(DEFAULT_SEED, 200).unwrap();
        assert_eq!(outcome.cases, 200);
    }

    #[test]
    fn interval_agreement_suite_passes_small_run() {
        let outcome = check_interval_closed_form(DEFAULT_SEED, 200).unwrap();
        assert_eq!(outcome.cases, 200);
        assert!(outcome.max_error <= 1e-9);
    }

    #[test]
    fn random_scenarios_visit_both_verdicts() {
        let mut r = rng(12);
        let mut representable = 0;
        let mut violating = 0;
        for _ in 0..300 {
            let s = random_bch_scenario(&mut r);
            if bch_check(&s).unwrap().representable {
                representable += 1;
            } else {
                violating += 1;
            }
        }
        assert!(representable > 0, "sampler never produced representable data");
        assert!(violating > 0, "sampler never produced a violation");
    }
}
