//! Measurement scenarios: named variables, a list of jointly measurable
//! contexts, and a data source (a quantum state with observables, or raw
//! moment values). Includes the three builtin scenarios exercising the
//! pipeline — the spin-singlet pair, the two-qubit configuration that
//! forces an unmeasured correlation to zero while bounding it away from
//! zero, and the three-qubit parity contradiction.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{
    moments_to_distribution, Distribution, Domain, MomentConstraints, VariableSet,
};
use crate::quantum::{
    joint_distribution, pauli, tensor, ComplexMatrix, Context, Convention, PauliAxis, PureState,
    YesNoObservable,
};
use crate::representability::{lp_interval, BchScenario, Interval};
use crate::tolerance;
use crate::tree::atom_index_for;

/// Where a scenario's correlation data comes from.
#[derive(Clone, Debug)]
pub enum ScenarioSource {
    /// A pure state and one observable per variable; context distributions
    /// are computed from the Born rule.
    Quantum {
        state: PureState,
        observables: BTreeMap<String, YesNoObservable>,
    },
    /// Directly specified moments; context distributions are reconstructed
    /// by moment inversion.
    Moments(MomentConstraints),
}

/// A set of binary observables, the contexts that are jointly measurable,
/// and the source of their statistics.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScenarioRepr", into = "ScenarioRepr")]
pub struct Scenario {
    name: String,
    variables: VariableSet,
    contexts: Vec<Vec<String>>,
    source: ScenarioSource,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum SourceRepr {
    Quantum {
        state: PureState,
        observables: BTreeMap<String, YesNoObservable>,
    },
    /// Moment entries keyed by comma-joined variable names (e.g. `"A1,B2"`).
    Moments { entries: BTreeMap<String, f64> },
}

#[derive(Clone, Serialize, Deserialize)]
struct ScenarioRepr {
    name: String,
    domain: Domain,
    variables: Vec<String>,
    contexts: Vec<Vec<String>>,
    source: SourceRepr,
}

impl From<Scenario> for ScenarioRepr {
    fn from(s: Scenario) -> ScenarioRepr {
        let domain = s.variables.domain();
        let variables = s.variables.names().to_vec();
        let source = match s.source {
            ScenarioSource::Quantum { state, observables } => {
                SourceRepr::Quantum { state, observables }
            }
            ScenarioSource::Moments(m) => {
                let entries = m
                    .iter()
                    .map(|(mask, v)| (m.monomial_names(mask).join(","), v))
                    .collect();
                SourceRepr::Moments { entries }
            }
        };
        ScenarioRepr { name: s.name, domain, variables, contexts: s.contexts, source }
    }
}

impl TryFrom<ScenarioRepr> for Scenario {
    type Error = Error;

    fn try_from(r: ScenarioRepr) -> Result<Scenario> {
        let variables = VariableSet::new(r.variables, r.domain)?;
        let source = match r.source {
            SourceRepr::Quantum { state, observables } => {
                ScenarioSource::Quantum { state, observables }
            }
            SourceRepr::Moments { entries } => {
                let mut m = MomentConstraints::new(variables.clone());
                for (key, value) in entries {
                    let names: Vec<&str> = key.split(',').map(str::trim).collect();
                    m.insert(&names, value)?;
                }
                ScenarioSource::Moments(m)
            }
        };
        Scenario::new(r.name, variables, r.contexts, source)
    }
}

impl Scenario {
    /// Validates and builds a scenario. Every context is checked against
    /// the variable list, and every context distribution is constructed
    /// once so that malformed sources (non-commuting observables, missing
    /// or unrealizable moments, dimension mismatches) fail here rather than
    /// at first use.
    pub fn new(
        name: impl Into<String>,
        variables: VariableSet,
        contexts: Vec<Vec<String>>,
        source: ScenarioSource,
    ) -> Result<Scenario> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidVariables("empty scenario name".into()));
        }
        if variables.is_empty() {
            return Err(Error::InvalidVariables("scenario has no variables".into()));
        }
        if contexts.is_empty() {
            return Err(Error::InvalidContext("scenario has no contexts".into()));
        }
        for ctx in &contexts {
            let mask = variables.mask_of(ctx)?;
            if mask == 0 {
                return Err(Error::InvalidContext("empty context".into()));
            }
        }
        match &source {
            ScenarioSource::Quantum { state, observables } => {
                for (name, obs) in observables {
                    if !variables.contains(name) {
                        return Err(Error::InvalidVariables(format!(
                            "observable for unknown variable `{name}`"
                        )));
                    }
                    if obs.convention().domain() != variables.domain() {
                        return Err(Error::InvalidContext(format!(
                            "observable `{name}` uses the {} convention, scenario uses {}",
                            obs.convention().domain().label(),
                            variables.domain().label()
                        )));
                    }
                    if obs.dim() != state.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: state.dim(),
                            got: obs.dim(),
                        });
                    }
                }
            }
            ScenarioSource::Moments(m) => {
                if m.vars() != &variables {
                    return Err(Error::InvalidVariables(
                        "moment entries are not over the scenario variables".into(),
                    ));
                }
            }
        }
        let scenario = Scenario { name, variables, contexts, source };
        for ctx in &scenario.contexts {
            scenario.context_distribution(ctx)?;
        }
        Ok(scenario)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &VariableSet {
        &self.variables
    }

    pub fn contexts(&self) -> &[Vec<String>] {
        &self.contexts
    }

    pub fn source(&self) -> &ScenarioSource {
        &self.source
    }

    /// Joint outcome distribution of one context, in the order given.
    pub fn context_distribution<S: AsRef<str>>(&self, context: &[S]) -> Result<Distribution> {
        self.variables.mask_of(context)?;
        match &self.source {
            ScenarioSource::Quantum { state, observables } => {
                let mut entries = Vec::with_capacity(context.len());
                for name in context {
                    let name = name.as_ref();
                    let obs = observables.get(name).ok_or_else(|| {
                        Error::InvalidContext(format!("no observable for variable `{name}`"))
                    })?;
                    entries.push((name.to_string(), obs.clone()));
                }
                joint_distribution(state, &Context::new(entries)?)
            }
            ScenarioSource::Moments(m) => {
                let names: Vec<String> =
                    context.iter().map(|s| s.as_ref().to_string()).collect();
                let vars = VariableSet::new(names.clone(), self.variables.domain())?;
                let mut sub = MomentConstraints::new(vars);
                for mask in 1..(1u32 << names.len()) {
                    let monomial: Vec<&str> = (0..names.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| names[i].as_str())
                        .collect();
                    let value = m.get(&monomial)?.ok_or_else(|| {
                        Error::IncompleteMoments(format!("<{}>", monomial.join(" ")))
                    })?;
                    sub.insert(&monomial, value)?;
                }
                moments_to_distribution(&sub)
            }
        }
    }

    /// All moments of monomials that fit inside the given variable list:
    /// for each context, every non-empty monomial over `context ∩ vars` is
    /// collected, and values seen from several contexts must agree within
    /// tolerance.
    pub fn moments_within<S: AsRef<str>>(&self, vars: &[S]) -> Result<MomentConstraints> {
        for name in vars {
            self.variables.index_of(name.as_ref())?;
        }
        let target_vars = VariableSet::new(
            vars.iter().map(|s| s.as_ref().to_string()),
            self.variables.domain(),
        )?;
        let mut out = MomentConstraints::new(target_vars);
        for ctx in &self.contexts {
            let visible: Vec<&str> = ctx
                .iter()
                .filter(|name| vars.iter().any(|v| v.as_ref() == name.as_str()))
                .map(String::as_str)
                .collect();
            if visible.is_empty() {
                continue;
            }
            let d = self.context_distribution(ctx)?;
            for mask in 1..(1u32 << visible.len()) {
                let monomial: Vec<&str> = (0..visible.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| visible[i])
                    .collect();
                let value = d.moment(&monomial)?;
                if let Some(existing) = out.get(&monomial)? {
                    if (existing - value).abs() > tolerance() {
                        return Err(Error::InvalidMoments(format!(
                            "contexts disagree on <{}>: {existing} vs {value}",
                            monomial.join(" ")
                        )));
                    }
                } else {
                    out.insert(&monomial, value)?;
                }
            }
        }
        Ok(out)
    }

    /// Every moment measurable from some context.
    pub fn collected_moments(&self) -> Result<MomentConstraints> {
        let names = self.variables.names().to_vec();
        self.moments_within(&names)
    }

    /// Interprets this scenario's measurable moments as four-observable
    /// correlation data (variables `A1, A2, B1, B2` in the `{0,1}`
    /// convention with all four cross pairs measured).
    pub fn bch_scenario(&self) -> Result<BchScenario> {
        let m = self.moments_within(&["A1", "A2", "B1", "B2"])?;
        BchScenario::new(m)
    }
}

fn rscale(m: &ComplexMatrix, factor: f64) -> ComplexMatrix {
    m.scale(Complex64::new(factor, 0.0))
}

fn half_sum_with_identity(m: &ComplexMatrix, sign: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(m.rows());
    rscale(&id.add(&rscale(m, sign)).expect("same shape"), 0.5)
}

/// The spin-singlet scenario: projective yes/no observables on each qubit,
/// measured in the four cross pairs. Its data is not classically
/// representable — the two attainable ranges of the unmeasured `<A1 A2>`
/// are disjoint.
pub fn build_singlet_scenario() -> Scenario {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let state = PureState::from_real(&[0.0, inv, -inv, 0.0]).expect("unit vector");
    let id2 = ComplexMatrix::identity(2);
    let x = pauli(PauliAxis::X);
    let z = pauli(PauliAxis::Z);
    let diag = rscale(&x.add(&z).expect("same shape"), inv);
    let anti = rscale(&x.sub(&z).expect("same shape"), inv);

    let a1 = tensor(&half_sum_with_identity(&x, 1.0), &id2);
    let a2 = tensor(&half_sum_with_identity(&z, 1.0), &id2);
    let b1 = tensor(&id2, &half_sum_with_identity(&diag, -1.0));
    let b2 = tensor(&id2, &half_sum_with_identity(&anti, -1.0));

    let mut observables = BTreeMap::new();
    for (name, matrix) in [("A1", a1), ("A2", a2), ("B1", b1), ("B2", b2)] {
        observables.insert(
            name.to_string(),
            YesNoObservable::new(matrix, Convention::Projector).expect("valid projector"),
        );
    }
    let variables =
        VariableSet::new(["A1", "A2", "B1", "B2"], Domain::ZeroOne).expect("distinct names");
    let contexts = cross_pair_contexts();
    Scenario::new(
        "singlet",
        variables,
        contexts,
        ScenarioSource::Quantum { state, observables },
    )
    .expect("builtin scenario is valid")
}

fn cross_pair_contexts() -> Vec<Vec<String>> {
    [["A1", "B1"], ["A1", "B2"], ["A2", "B1"], ["A2", "B2"]]
        .iter()
        .map(|pair| pair.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// First analyzer angle (radians) on each side:
/// `2·asin(sqrt((sqrt(5)-1)/2))`, the choice maximizing the probability
/// margin that the first context forces to be positive.
pub const HARDY_ANGLE_L1: f64 = 1.8091137886047628;
/// See [`HARDY_ANGLE_L1`]; the two sides use the same optimal angle.
pub const HARDY_ANGLE_R1: f64 = 1.8091137886047628;
/// Second analyzer angle on the left side (the reference direction).
pub const HARDY_ANGLE_L2: f64 = 0.0;
/// Second analyzer angle on the right side (the reference direction).
pub const HARDY_ANGLE_R2: f64 = 0.0;

fn analyzer_plus(theta: f64) -> Vec<Complex64> {
    vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::new((theta / 2.0).sin(), 0.0),
    ]
}

fn analyzer_minus(theta: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(-(theta / 2.0).sin(), 0.0),
        Complex64::new((theta / 2.0).cos(), 0.0),
    ]
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

fn rank_one_projector(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// Two-qubit scenario whose statistics force the unmeasured `<A1 A2>` to be
/// exactly zero through one side while bounding it away from zero through
/// the other.
///
/// The state is the (normalized) component of `|l1+> ⊗ |r1->` orthogonal to
/// `|l2-> ⊗ |r2+>`, where `|θ±>` are the analyzer eigenvectors at angle
/// `θ`. `B` observables test the left qubit, `A` observables the right one.
/// Three of the four pair distributions then carry a structural zero for
/// every angle choice; the builder rejects angle combinations for which the
/// fourth, strictly positive margin degenerates to zero.
pub fn build_hardy_scenario(l1: f64, l2: f64, r1: f64, r2: f64) -> Result<Scenario> {
    let v = kron_vec(&analyzer_plus(l1), &analyzer_minus(r1));
    let w = kron_vec(&analyzer_minus(l2), &analyzer_plus(r2));
    let overlap: Complex64 = w.iter().zip(&v).map(|(wi, vi)| wi.conj() * vi).sum();
    let raw: Vec<Complex64> = v
        .iter()
        .zip(&w)
        .map(|(vi, wi)| vi - overlap * wi)
        .collect();
    let state = PureState::normalized(raw).map_err(|_| {
        Error::DegenerateParameters(
            "the two analyzer configurations coincide; no state separates them".into(),
        )
    })?;

    let id2 = ComplexMatrix::identity(2);
    let mut observables = BTreeMap::new();
    let entries = [
        ("A1", tensor(&id2, &rank_one_projector(&analyzer_plus(r1)))),
        ("A2", tensor(&id2, &rank_one_projector(&analyzer_plus(r2)))),
        ("B1", tensor(&rank_one_projector(&analyzer_plus(l1)), &id2)),
        ("B2", tensor(&rank_one_projector(&analyzer_plus(l2)), &id2)),
    ];
    for (name, matrix) in entries {
        observables.insert(
            name.to_string(),
            YesNoObservable::new(matrix, Convention::Projector)?,
        );
    }
    let variables = VariableSet::new(["A1", "A2", "B1", "B2"], Domain::ZeroOne)?;
    let scenario = Scenario::new(
        "hardy",
        variables,
        cross_pair_contexts(),
        ScenarioSource::Quantum { state, observables },
    )?;

    // Structural zeros that hold for every angle choice by orthogonality of
    // the analyzer eigenvectors; a violation would be an implementation bug.
    let zero_events: [(&str, &str, u8, u8); 3] = [
        ("A2", "B1", 0, 0),
        ("A2", "B2", 1, 0),
        ("A1", "B2", 1, 1),
    ];
    for (a, b, a_bit, b_bit) in zero_events {
        let d = scenario.context_distribution(&[a, b])?;
        let idx = atom_index_for(d.vars(), &[(a, a_bit), (b, b_bit)])?;
        if d.weight(idx) > tolerance() {
            return Err(Error::Internal(format!(
                "structural zero P({a}={a_bit}, {b}={b_bit}) = {} violated",
                d.weight(idx)
            )));
        }
    }

    let d11 = scenario.context_distribution(&["A1", "B1"])?;
    let margin = d11.weight(atom_index_for(d11.vars(), &[("A1", 1), ("B1", 0)])?);
    if margin <= tolerance() {
        return Err(Error::DegenerateParameters(format!(
            "P(A1=1, B1=0) = {margin}; aligned analyzer directions leave no forced margin"
        )));
    }
    Ok(scenario)
}

/// [`build_hardy_scenario`] at the optimal angles.
pub fn default_hardy_scenario() -> Scenario {
    build_hardy_scenario(
        HARDY_ANGLE_L1,
        HARDY_ANGLE_L2,
        HARDY_ANGLE_R1,
        HARDY_ANGLE_R2,
    )
    .expect("the optimal angles are not degenerate")
}

/// Three-qubit scenario with ±1 observables measured in four triples whose
/// outcomes admit no joint sign assignment: the product of the four
/// constrained parities is -1 while the observables appearing an even
/// number of times force +1.
pub fn build_ghsz_scenario() -> Scenario {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![0.0; 8];
    amplitudes[0] = inv;
    amplitudes[7] = -inv;
    let state = PureState::from_real(&amplitudes).expect("unit vector");

    let id2 = ComplexMatrix::identity(2);
    let x = pauli(PauliAxis::X);
    let y = pauli(PauliAxis::Y);
    let on_qubit = |m: &ComplexMatrix, qubit: usize| -> ComplexMatrix {
        let mut factors = [&id2, &id2, &id2];
        factors[qubit] = m;
        tensor(&tensor(factors[0], factors[1]), factors[2])
    };
    let neg_x = rscale(&x, -1.0);
    let neg_y = rscale(&y, -1.0);

    let mut observables = BTreeMap::new();
    let entries = [
        ("A1", on_qubit(&neg_x, 0)),
        ("A2", on_qubit(&neg_y, 0)),
        ("B1", on_qubit(&y, 1)),
        ("B2", on_qubit(&x, 1)),
        ("C1", on_qubit(&y, 2)),
        ("C2", on_qubit(&x, 2)),
    ];
    for (name, matrix) in entries {
        observables.insert(
            name.to_string(),
            YesNoObservable::new(matrix, Convention::Sign).expect("valid sign observable"),
        );
    }
    let variables = VariableSet::new(
        ["A1", "A2", "B1", "B2", "C1", "C2"],
        Domain::PlusMinus,
    )
    .expect("distinct names");
    let contexts: Vec<Vec<String>> = [
        ["A1", "B1", "C1"],
        ["A2", "B2", "C1"],
        ["A2", "B1", "C2"],
        ["A1", "B2", "C2"],
    ]
    .iter()
    .map(|ctx| ctx.iter().map(|s| s.to_string()).collect())
    .collect();
    Scenario::new(
        "ghsz",
        variables,
        contexts,
        ScenarioSource::Quantum { state, observables },
    )
    .expect("builtin scenario is valid")
}

/// The two maximal families of contexts of the three-qubit scenario that
/// admit a classical model: the first covers the contexts containing `C1`,
/// the second those containing `C2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhszModel {
    One,
    Two,
}

impl GhszModel {
    /// The hidden-side variable this model keeps.
    pub fn hidden_variable(self) -> &'static str {
        match self {
            GhszModel::One => "C1",
            GhszModel::Two => "C2",
        }
    }
}

/// An explicit classical distribution reproducing the context statistics of
/// one model family: `A1, A2` and the hidden variable are uniform
/// independent signs, and `B1, B2` are the deterministic products required
/// by the constrained parities.
pub fn build_ghsz_model(model: GhszModel) -> Distribution {
    let names = [
        "A1".to_string(),
        "A2".to_string(),
        "B1".to_string(),
        "B2".to_string(),
        model.hidden_variable().to_string(),
    ];
    let vars = VariableSet::new(names, Domain::PlusMinus).expect("distinct names");
    let domain = Domain::PlusMinus;
    Distribution::from_fn(vars, |atom| {
        let a1 = atom.value(0, domain);
        let a2 = atom.value(1, domain);
        let b1 = atom.value(2, domain);
        let b2 = atom.value(3, domain);
        let c = atom.value(4, domain);
        let (need_b1, need_b2) = match model {
            GhszModel::One => (-a1 * c, -a2 * c),
            GhszModel::Two => (-a2 * c, a1 * c),
        };
        if b1 == need_b1 && b2 == need_b2 {
            0.125
        } else {
            0.0
        }
    })
    .expect("deterministic table sums to one")
}

/// What [`analyze_ghsz`] establishes about the three-qubit scenario.
#[derive(Clone, Debug)]
pub struct GhszAnalysis {
    /// Classical model for the contexts containing `C1`.
    pub model1: Distribution,
    /// Classical model for the contexts containing `C2`.
    pub model2: Distribution,
    /// Whether the two models agree on every moment of `A1, A2, B1, B2`
    /// except the full four-variable product.
    pub shared_moments_agree: bool,
    /// `<A1 A2 B1 B2>` under model 1 and model 2 respectively (+1 and -1).
    pub four_correlation: (f64, f64),
    /// Whether the exhaustive search over all 64 deterministic sign
    /// assignments confirms that no assignment satisfies all four contexts.
    pub parity_obstruction: bool,
}

/// Verifies the two-model structure of the three-qubit scenario: each model
/// reproduces its context family atom by atom, the models agree on all
/// shared moments except the four-variable product (where they are forced
/// to opposite signs), and no deterministic assignment satisfies all four
/// contexts at once.
pub fn analyze_ghsz() -> Result<GhszAnalysis> {
    let scenario = build_ghsz_scenario();
    let model1 = build_ghsz_model(GhszModel::One);
    let model2 = build_ghsz_model(GhszModel::Two);
    for ctx in scenario.contexts() {
        let quantum = scenario.context_distribution(ctx)?;
        let model = if ctx.iter().any(|v| v == "C1") { &model1 } else { &model2 };
        let marginal = model.marginal_onto(quantum.vars())?;
        let diff = marginal.max_abs_diff(&quantum)?;
        if diff > tolerance() {
            return Err(Error::Internal(format!(
                "classical model misses context [{}] by {diff}",
                ctx.join(", ")
            )));
        }
    }

    let shared = ["A1", "A2", "B1", "B2"];
    let four_correlation = (model1.moment(&shared)?, model2.moment(&shared)?);
    let mut shared_moments_agree = true;
    for mask in 1u32..15 {
        let monomial: Vec<&str> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| shared[i]).collect();
        let v1 = model1.moment(&monomial)?;
        let v2 = model2.moment(&monomial)?;
        if (v1 - v2).abs() > tolerance() {
            shared_moments_agree = false;
        }
    }

    let mut solutions = 0u32;
    for bits in 0u32..64 {
        let sign = |i: u32| if bits >> i & 1 == 1 { 1.0 } else { -1.0 };
        let (a1, a2, b1, b2, c1, c2) =
            (sign(0), sign(1), sign(2), sign(3), sign(4), sign(5));
        if a1 * b1 * c1 == -1.0
            && a2 * b2 * c1 == -1.0
            && a2 * b1 * c2 == -1.0
            && a1 * b2 * c2 == 1.0
        {
            solutions += 1;
        }
    }

    Ok(GhszAnalysis {
        model1,
        model2,
        shared_moments_agree,
        four_correlation,
        parity_obstruction: solutions == 0,
    })
}

/// The exact attainable range of `<A1 A2 B1 B2>` in the three-qubit
/// scenario, given only the moments measurable together with one hidden
/// variable (`C1` for model one, `C2` for model two). Each family pins the
/// product to a single value — and the two values differ in sign.
pub fn ghsz_forced_four_correlation(model: GhszModel) -> Result<Interval> {
    let scenario = build_ghsz_scenario();
    let visible = ["A1", "A2", "B1", "B2", model.hidden_variable()];
    let m = scenario.moments_within(&visible)?;
    lp_interval(&["A1", "A2", "B1", "B2"], &m)
}
