//! Report types produced by the subcommands, with text and JSON renderings.
//!
//! The JSON form is the `serde` serialization of [`Report`]; it round-trips
//! losslessly. The text form prints every probability, moment, and interval
//! endpoint with nine decimal places, and error magnitudes in scientific
//! notation with nine decimal places.

use corrext_core::{EmptyKind, Interval, RepresentabilityReport};
use serde::{Deserialize, Serialize};

/// Formats a value with nine decimal places, collapsing signed zeros and
/// sub-resolution noise (|x| < 1e-12) to a plain zero.
pub fn fmt_float(x: f64) -> String {
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{x:.9}")
}

/// Formats an error magnitude in scientific notation, nine decimal places.
pub fn fmt_error(x: f64) -> String {
    format!("{x:.9e}")
}

/// Formats an interval, naming the reason when it is empty.
pub fn fmt_interval(i: &Interval) -> String {
    if i.empty {
        match i.kind {
            Some(EmptyKind::Infeasible) => {
                "infeasible (the constraints admit no distribution)".to_string()
            }
            _ => "empty (the two bounds are disjoint)".to_string(),
        }
    } else {
        format!("[{}, {}]", fmt_float(i.lo), fmt_float(i.hi))
    }
}

/// Formats a monomial as `<A1 B2>`.
pub fn fmt_monomial(names: &[String]) -> String {
    format!("<{}>", names.join(" "))
}

/// One measured or derived moment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentEntry {
    pub monomial: Vec<String>,
    pub value: f64,
}

/// All moments measurable within one context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContextMoments {
    pub context: Vec<String>,
    pub moments: Vec<MomentEntry>,
}

/// Output of `predict`: the full set of per-context predictions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PredictReport {
    pub scenario: String,
    pub contexts: Vec<ContextMoments>,
}

/// Output of `range`: the attainable interval for a target monomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RangeReport {
    pub scenario: String,
    pub target: Vec<String>,
    /// Variables whose measurable moments constrain the range.
    pub constraint_variables: Vec<String>,
    pub lp: Interval,
    /// Closed-form interval, present when the constraints consist of the
    /// singles of three variables plus two pair moments through a shared
    /// variable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_form: Option<Interval>,
    /// Largest endpoint deviation between the closed form and the LP.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_form_deviation: Option<f64>,
}

/// Output of `check` in the four-observable setting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub scenario: String,
    pub analysis: RepresentabilityReport,
}

/// Output of `check --builtin ghsz`: the two-model parity analysis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GhszCheckReport {
    pub scenario: String,
    /// The four perfectly correlated triple products.
    pub triple_correlations: Vec<MomentEntry>,
    /// `<A1 A2 B1 B2>` under the model built from the `C1` contexts.
    pub model1_four_correlation: f64,
    /// `<A1 A2 B1 B2>` under the model built from the `C2` contexts.
    pub model2_four_correlation: f64,
    /// Whether the two models agree on every other shared moment.
    pub shared_moments_agree: bool,
    /// Range forced on `<A1 A2 B1 B2>` by the `C1` context family alone.
    pub forced_with_c1: Interval,
    /// Range forced on `<A1 A2 B1 B2>` by the `C2` context family alone.
    pub forced_with_c2: Interval,
    /// Whether no deterministic sign assignment satisfies all contexts.
    pub parity_obstruction: bool,
}

/// Outcome of one randomized property.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Output of `selftest`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyOutcome>,
    pub passed: bool,
}

/// Machine-readable report written by `--json`, tagged by subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Predict(PredictReport),
    Range(RangeReport),
    Check(CheckReport),
    GhszCheck(GhszCheckReport),
    Selftest(SelftestReport),
}

impl Report {
    /// Renders the aligned-text form printed to stdout.
    pub fn render_text(&self) -> String {
        match self {
            Report::Predict(r) => render_predict(r),
            Report::Range(r) => render_range(r),
            Report::Check(r) => render_check(r),
            Report::GhszCheck(r) => render_ghsz(r),
            Report::Selftest(r) => render_selftest(r),
        }
    }
}

fn render_moment_table(out: &mut String, entries: &[MomentEntry], indent: &str) {
    let labels: Vec<String> =
        entries.iter().map(|e| fmt_monomial(&e.monomial)).collect();
    let width = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    for (label, entry) in labels.iter().zip(entries) {
        out.push_str(&format!("{indent}{label:<width$}  {}\n", fmt_float(entry.value)));
    }
}

fn render_predict(r: &PredictReport) -> String {
    let mut out = format!("scenario: {}\n", r.scenario);
    for ctx in &r.contexts {
        out.push_str(&format!("\ncontext {}\n", ctx.context.join(", ")));
        render_moment_table(&mut out, &ctx.moments, "  ");
    }
    out
}

fn render_range(r: &RangeReport) -> String {
    let mut out = format!("scenario: {}\n", r.scenario);
    out.push_str(&format!("target: {}\n", fmt_monomial(&r.target)));
    out.push_str(&format!("constraints over: {}\n", r.constraint_variables.join(", ")));
    out.push_str(&format!("LP range:          {}\n", fmt_interval(&r.lp)));
    if let Some(closed) = &r.closed_form {
        out.push_str(&format!("closed-form range: {}\n", fmt_interval(closed)));
    }
    out
}

fn render_check(r: &CheckReport) -> String {
    let mut out = format!("scenario: {}\n", r.scenario);
    out.push_str(&format!(
        "range of <A1 A2> with B1: {}\n",
        fmt_interval(&r.analysis.interval_b1)
    ));
    out.push_str(&format!(
        "range of <A1 A2> with B2: {}\n",
        fmt_interval(&r.analysis.interval_b2)
    ));
    out.push_str(&format!(
        "intersection:             {}\n",
        fmt_interval(&r.analysis.intersection)
    ));
    let worst =
        r.analysis.fine_residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.push_str(&format!("largest inequality residual: {}\n", fmt_float(worst)));
    if r.analysis.representable {
        out.push_str("verdict: representable\n");
        if let Some(witness) = &r.analysis.witness {
            out.push_str(&format!(
                "witness over {} (outcome  weight):\n",
                witness.vars().names().join(", ")
            ));
            for (atom, weight) in witness.atoms() {
                out.push_str(&format!("  {}  {}\n", atom.bit_string(), fmt_float(weight)));
            }
        }
    } else {
        out.push_str(
            "verdict: not representable: no joint distribution reproduces all contexts\n",
        );
    }
    out
}

fn render_ghsz(r: &GhszCheckReport) -> String {
    let mut out = format!("scenario: {}\n", r.scenario);
    render_moment_table(&mut out, &r.triple_correlations, "");
    out.push_str(&format!(
        "model from the C1 contexts gives <A1 A2 B1 B2> = {}\n",
        fmt_float(r.model1_four_correlation)
    ));
    out.push_str(&format!(
        "model from the C2 contexts gives <A1 A2 B1 B2> = {}\n",
        fmt_float(r.model2_four_correlation)
    ));
    out.push_str(&format!(
        "every distribution matching the C1 contexts has <A1 A2 B1 B2> in {}\n",
        fmt_interval(&r.forced_with_c1)
    ));
    out.push_str(&format!(
        "every distribution matching the C2 contexts has <A1 A2 B1 B2> in {}\n",
        fmt_interval(&r.forced_with_c2)
    ));
    out.push_str(&format!(
        "models agree on all shared moments: {}\n",
        if r.shared_moments_agree { "yes" } else { "no" }
    ));
    out.push_str(&format!(
        "deterministic assignments satisfying all four contexts: {}\n",
        if r.parity_obstruction { "none of 64" } else { "found" }
    ));
    out.push_str(if r.parity_obstruction {
        "verdict: not representable: the context families force contradictory values\n"
    } else {
        "verdict: representable\n"
    });
    out
}

fn render_selftest(r: &SelftestReport) -> String {
    let mut out = format!("selftest with seed {} and {} cases per property\n", r.seed, r.cases);
    let width = r.properties.iter().map(|p| p.name.len()).max().unwrap_or(0);
    for p in &r.properties {
        if p.passed {
            out.push_str(&format!(
                "  {:<width$}  {:>6} cases  max error {}  ok\n",
                p.name,
                p.cases,
                fmt_error(p.max_error)
            ));
        } else {
            out.push_str(&format!(
                "  {:<width$}  FAILED: {}\n",
                p.name,
                p.detail.as_deref().unwrap_or("unknown failure")
            ));
        }
    }
    out.push_str(if r.passed { "all properties hold\n" } else { "a property failed\n" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use corrext_core::{bch_check, BchScenario};

    fn sample_reports() -> Vec<Report> {
        let product =
            BchScenario::from_values(0.5, 0.5, 0.5, 0.5, [[0.25, 0.25], [0.25, 0.25]])
                .expect("valid product moments");
        let analysis = bch_check(&product).expect("product data is representable");
        vec![
            Report::Predict(PredictReport {
                scenario: "sample".to_string(),
                contexts: vec![ContextMoments {
                    context: vec!["A1".to_string(), "B1".to_string()],
                    moments: vec![MomentEntry {
                        monomial: vec!["A1".to_string(), "B1".to_string()],
                        value: 0.25,
                    }],
                }],
            }),
            Report::Range(RangeReport {
                scenario: "sample".to_string(),
                target: vec!["A1".to_string(), "A2".to_string()],
                constraint_variables: vec![
                    "A1".to_string(),
                    "A2".to_string(),
                    "B1".to_string(),
                ],
                lp: Interval::from_bounds(0.25, 0.5),
                closed_form: Some(Interval::from_bounds(0.25, 0.5)),
                closed_form_deviation: Some(0.0),
            }),
            Report::Check(CheckReport { scenario: "sample".to_string(), analysis }),
            Report::Selftest(SelftestReport {
                seed: 7,
                cases: 10,
                properties: vec![PropertyOutcome {
                    name: "tree glue marginals".to_string(),
                    cases: 10,
                    max_error: 1e-15,
                    passed: true,
                    detail: None,
                }],
                passed: true,
            }),
        ]
    }

    #[test]
    fn json_reports_round_trip() {
        for report in sample_reports() {
            let value = serde_json::to_value(&report).expect("serializable");
            let back: Report = serde_json::from_value(value.clone()).expect("deserializable");
            let again = serde_json::to_value(&back).expect("reserializable");
            assert_eq!(value, again);
        }
    }

    #[test]
    fn floats_print_nine_decimals_and_clean_zeros() {
        assert_eq!(fmt_float(0.4267766952966369), "0.426776695");
        assert_eq!(fmt_float(-0.0), "0.000000000");
        assert_eq!(fmt_float(3e-13), "0.000000000");
        assert_eq!(fmt_float(-1.0), "-1.000000000");
    }

    #[test]
    fn empty_intervals_name_their_reason() {
        let disjoint = Interval::from_bounds(0.5, 0.1);
        assert!(fmt_interval(&disjoint).contains("disjoint"));
        assert!(fmt_interval(&Interval::infeasible()).contains("infeasible"));
    }
}
