//! Command-line front end for the correlation-extension toolkit.
//!
//! Loads a scenario (built-in or from a JSON file), runs one of the
//! analyses from `corrext-core`, prints an aligned-text report, and
//! optionally writes the machine-readable JSON form.
//!
//! Exit codes: 0 when the data is representable (or the query succeeded),
//! 1 when a violation of classical representability was detected, 2 on
//! input errors, 3 on internal invariant failures.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrext_core::sampling::{
    check_interval_closed_form, check_moment_round_trip, check_tree_glue_marginals,
    check_verdict_agreement, SuiteOutcome, DEFAULT_SEED,
};
use corrext_core::{
    analyze_ghsz, bch_check, bell_wigner_interval, build_ghsz_scenario, build_singlet_scenario,
    default_hardy_scenario, ghsz_forced_four_correlation, lp_interval, set_tolerance, tolerance,
    Error, GhszModel, Scenario,
};

use report::{
    CheckReport, ContextMoments, GhszCheckReport, MomentEntry, PredictReport, PropertyOutcome,
    RangeReport, Report, SelftestReport,
};

/// Exit code signalling that the analyzed data violates classical
/// representability (as opposed to a usage or internal error).
const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_INTERNAL_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "corrext",
    version,
    about = "Decide classical representability of partial correlation data \
             and compute attainable ranges of unmeasured correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the machine-readable JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Numerical tolerance used by every comparison.
    #[arg(long, global = true, value_name = "X", default_value_t = corrext_core::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every per-context distribution and its moments.
    Predict(PredictArgs),
    /// Compute the attainable range of an unmeasured correlation.
    Range(RangeArgs),
    /// Decide whether the measured contexts admit one joint distribution.
    Check(CheckArgs),
    /// Run the randomized property suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct RangeArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,

    /// Variables of the target monomial, comma separated (e.g. `A1,A2`).
    #[arg(long, value_delimiter = ',', value_name = "VARS", required = true)]
    target: Vec<String>,

    /// Constrain the range using only the contexts reachable through this
    /// variable; the default uses every measurable moment.
    #[arg(long, value_name = "VAR")]
    with: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the deterministic random generator.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Number of random cases per property.
    #[arg(long, default_value_t = 10_000)]
    cases: usize,
}

/// Scenario selector: exactly one of a built-in name or a JSON file.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScenarioArgs {
    /// Analyze a built-in scenario.
    #[arg(long, value_enum, value_name = "NAME")]
    builtin: Option<Builtin>,

    /// Load a scenario description from a JSON file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Singlet,
    Hardy,
    Ghsz,
}

/// A failed run, split by which exit code it maps to.
enum Failure {
    /// Unusable input: missing file, malformed JSON, unknown variable.
    Input(String),
    /// A violated internal invariant; never caused by user input.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.tolerance.is_finite() || cli.tolerance <= 0.0 {
        eprintln!("error: tolerance must be a positive finite number");
        return ExitCode::from(EXIT_INPUT_ERROR);
    }
    set_tolerance(cli.tolerance);
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let (report, code) = match &cli.command {
        Command::Predict(args) => {
            let scenario = load_scenario(&args.scenario)?;
            (Report::Predict(cmd_predict(&scenario)?), ExitCode::SUCCESS)
        }
        Command::Range(args) => {
            let scenario = load_scenario(&args.scenario)?;
            let (report, code) = cmd_range(&scenario, &args.target, args.with.as_deref())?;
            (Report::Range(report), code)
        }
        Command::Check(args) => {
            if args.scenario.builtin == Some(Builtin::Ghsz) {
                let (report, code) = cmd_check_ghsz()?;
                (Report::GhszCheck(report), code)
            } else {
                let scenario = load_scenario(&args.scenario)?;
                let (report, code) = cmd_check(&scenario)?;
                (Report::Check(report), code)
            }
        }
        Command::Selftest(args) => {
            let (report, code) = cmd_selftest(args.seed, args.cases);
            (Report::Selftest(report), code)
        }
    };
    print!("{}", report.render_text());
    if let Some(path) = &cli.json {
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::Internal(format!("cannot encode report: {e}")))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(code)
}

fn load_scenario(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    if let Some(builtin) = args.builtin {
        return Ok(match builtin {
            Builtin::Singlet => build_singlet_scenario(),
            Builtin::Hardy => default_hardy_scenario(),
            Builtin::Ghsz => build_ghsz_scenario(),
        });
    }
    let path = args.file.as_ref().expect("clap guarantees one selector");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("invalid scenario in {}: {e}", path.display())))?;
    Ok(scenario)
}

/// Lists the moments of every non-empty monomial within one context,
/// singles first, then pairs, and so on.
fn context_moments(scenario: &Scenario, context: &[String]) -> Result<ContextMoments, Failure> {
    let dist = scenario.context_distribution(context)?;
    let mut masks: Vec<u32> = (1..(1u32 << context.len())).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut moments = Vec::with_capacity(masks.len());
    for mask in masks {
        let monomial: Vec<String> = (0..context.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| context[i].clone())
            .collect();
        let value = dist.moment(&monomial)?;
        moments.push(MomentEntry { monomial, value });
    }
    Ok(ContextMoments { context: context.to_vec(), moments })
}

fn cmd_predict(scenario: &Scenario) -> Result<PredictReport, Failure> {
    let mut contexts = Vec::with_capacity(scenario.contexts().len());
    for context in scenario.contexts() {
        contexts.push(context_moments(scenario, context)?);
    }
    Ok(PredictReport { scenario: scenario.name().to_string(), contexts })
}

fn cmd_range(
    scenario: &Scenario,
    target: &[String],
    with: Option<&str>,
) -> Result<(RangeReport, ExitCode), Failure> {
    let constraint_variables: Vec<String> = match with {
        Some(extra) => {
            let mut vars = target.to_vec();
            if !vars.iter().any(|v| v == extra) {
                vars.push(extra.to_string());
            }
            vars
        }
        None => scenario.variables().names().to_vec(),
    };
    let constraints = scenario.moments_within(&constraint_variables)?;
    let lp = lp_interval(target, &constraints)?;
    // The closed form exists only for the three-variable two-context shape;
    // any other constraint set simply has no closed-form column.
    let closed_form = bell_wigner_interval(&constraints).ok();
    let closed_form_deviation = match &closed_form {
        Some(closed) if !closed.empty && !lp.empty => {
            Some((closed.lo - lp.lo).abs().max((closed.hi - lp.hi).abs()))
        }
        Some(closed) if closed.empty != lp.empty => {
            return Err(Failure::Internal(
                "closed form and LP disagree on feasibility".to_string(),
            ));
        }
        _ => None,
    };
    if let Some(deviation) = closed_form_deviation {
        if deviation > tolerance() {
            return Err(Failure::Internal(format!(
                "closed form and LP disagree by {deviation:.3e}"
            )));
        }
    }
    let code =
        if lp.empty { ExitCode::from(EXIT_VIOLATION) } else { ExitCode::SUCCESS };
    let report = RangeReport {
        scenario: scenario.name().to_string(),
        target: target.to_vec(),
        constraint_variables,
        lp,
        closed_form,
        closed_form_deviation,
    };
    Ok((report, code))
}

fn cmd_check(scenario: &Scenario) -> Result<(CheckReport, ExitCode), Failure> {
    let analysis = bch_check(&scenario.bch_scenario()?)?;
    let code = if analysis.representable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    };
    Ok((CheckReport { scenario: scenario.name().to_string(), analysis }, code))
}

fn cmd_check_ghsz() -> Result<(GhszCheckReport, ExitCode), Failure> {
    let scenario = build_ghsz_scenario();
    let mut triple_correlations = Vec::with_capacity(scenario.contexts().len());
    for context in scenario.contexts() {
        let value = scenario.context_distribution(context)?.moment(context)?;
        triple_correlations.push(MomentEntry { monomial: context.clone(), value });
    }
    let analysis = analyze_ghsz()?;
    let forced_with_c1 = ghsz_forced_four_correlation(GhszModel::One)?;
    let forced_with_c2 = ghsz_forced_four_correlation(GhszModel::Two)?;
    let report = GhszCheckReport {
        scenario: scenario.name().to_string(),
        triple_correlations,
        model1_four_correlation: analysis.four_correlation.0,
        model2_four_correlation: analysis.four_correlation.1,
        shared_moments_agree: analysis.shared_moments_agree,
        forced_with_c1,
        forced_with_c2,
        parity_obstruction: analysis.parity_obstruction,
    };
    let code = if report.parity_obstruction {
        ExitCode::from(EXIT_VIOLATION)
    } else {
        ExitCode::SUCCESS
    };
    Ok((report, code))
}

fn cmd_selftest(seed: u64, cases: usize) -> (SelftestReport, ExitCode) {
    let suites: [(&str, fn(u64, usize) -> corrext_core::Result<SuiteOutcome>); 4] = [
        ("tree glue marginals", check_tree_glue_marginals),
        ("moment round trip", check_moment_round_trip),
        ("verdict agreement", check_verdict_agreement),
        ("closed form vs LP", check_interval_closed_form),
    ];
    let mut properties = Vec::with_capacity(suites.len());
    for (name, suite) in suites {
        let outcome = match suite(seed, cases) {
            Ok(outcome) => PropertyOutcome {
                name: name.to_string(),
                cases: outcome.cases,
                max_error: outcome.max_error,
                passed: true,
                detail: None,
            },
            Err(e) => PropertyOutcome {
                name: name.to_string(),
                cases: 0,
                max_error: 0.0,
                passed: false,
                detail: Some(e.to_string()),
            },
        };
        properties.push(outcome);
    }
    let passed = properties.iter().all(|p| p.passed);
    let code =
        if passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INTERNAL_ERROR) };
    (SelftestReport { seed, cases, properties, passed }, code)
}
