//! Command-line front end: configuration parsing, command dispatch and the
//! JSON report format.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::NewtonBoundVariant;
use crate::classify::classify_report;
use crate::error::Error;
use crate::linalg::{distance, norm};
use crate::model::{
    central_residual_flat, central_residual_scale, CentralConfig, MassConvention, MaxwellConfig, NewtonConfig, Point,
    Potential, SinrConfig,
};
use crate::polysys::{point_with_slacks, positions_with_slacks};
use crate::problem::{ExactProblem, ProblemConfig};
use crate::scalar::{format_f64, parse_rational, Scalar};
use crate::solve::{
    complex_oracle_m0_d2, find_critical_points, line_oracle_d1, SolveReport, SolverSettings, SLACK_TOL,
};
use crate::Rational;

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BOUND_VIOLATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    BoundViolation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => EXIT_IO,
            Self::Parse(_) | Self::Validation(_) => EXIT_VALIDATION,
            Self::BoundViolation(_) => EXIT_BOUND_VIOLATION,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolation { .. } => Self::BoundViolation(e.to_string()),
            Error::Validation(msg) => Self::Validation(msg),
            other => Self::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bound,
    Solve,
    Verify,
    Oracle,
    EmitSystem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ConventionArg {
    /// `m_i` in the pair term.
    Paper,
    /// `m_j` in the pair term.
    #[default]
    Standard,
}

impl From<ConventionArg> for MassConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => MassConvention::AsWritten,
            ConventionArg::Standard => MassConvention::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SystemChoice {
    /// Position-only system for even exponents, slack form otherwise.
    #[default]
    Default,
    Slack,
}

/// Overrides applied on top of the configuration and default settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub starts: Option<usize>,
    pub threads: Option<usize>,
    pub convention: Option<MassConvention>,
    pub newton_bound: NewtonBoundVariant,
    pub system: SystemChoice,
    pub report_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub config_path: PathBuf,
    pub seed: u64,
    pub overrides: Overrides,
    pub out_path: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "equilibria", version, about = "Critical points of point-source potentials and their bounds")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Print the bound on isolated critical points and its certificate.
    Bound(Flags),
    /// Locate critical points and write the report.
    Solve(Flags),
    /// Re-check a report against the configuration.
    Verify(Flags),
    /// Run the applicable reference oracle.
    Oracle(Flags),
    /// Write the polynomial system as JSON.
    EmitSystem(Flags),
}

#[derive(clap::Args, Debug)]
struct Flags {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    #[arg(long)]
    variant_newton_bound: bool,
    /// Report to check (verify).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SystemChoice::Default)]
    system: SystemChoice,
}

impl RunManifest {
    fn from_flags(command: Command, f: Flags) -> Self {
        Self {
            command,
            config_path: f.config,
            seed: f.seed,
            overrides: Overrides {
                starts: f.starts,
                threads: f.threads,
                convention: f.convention.map(Into::into),
                newton_bound: if f.variant_newton_bound {
                    NewtonBoundVariant::Summary
                } else {
                    NewtonBoundVariant::Theorem
                },
                system: f.system,
                report_path: f.report,
            },
            out_path: f.out,
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let manifest = match cli.command {
        Sub::Bound(f) => RunManifest::from_flags(Command::Bound, f),
        Sub::Solve(f) => RunManifest::from_flags(Command::Solve, f),
        Sub::Verify(f) => RunManifest::from_flags(Command::Verify, f),
        Sub::Oracle(f) => RunManifest::from_flags(Command::Oracle, f),
        Sub::EmitSystem(f) => RunManifest::from_flags(Command::EmitSystem, f),
    };
    run(&manifest)
}

/// Output text and exit code of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

/// Runs the manifest, writing output to `out_path` or stdout and errors to
/// stderr.
pub fn run(manifest: &RunManifest) -> i32 {
    match execute(manifest) {
        Ok(outcome) => {
            let written = match &manifest.out_path {
                Some(path) => fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_IO
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs the manifest and returns its output without writing it.
pub fn execute(manifest: &RunManifest) -> Result<Outcome, CliError> {
    let mut problem = parse_config(&read(&manifest.config_path)?)?;
    if let (ProblemConfig::Central(c), Some(conv)) = (&problem, manifest.overrides.convention) {
        problem = ProblemConfig::Central(c.with_convention(conv));
    }
    let ok = |text| Ok(Outcome { text, code: EXIT_OK });
    match manifest.command {
        Command::Bound => {
            let b = problem.bound(manifest.overrides.newton_bound)?;
            ok(format!("{}\n{}\n", b.value, b.certificate))
        }
        Command::EmitSystem => {
            let sys = match manifest.overrides.system {
                SystemChoice::Default => problem.default_system()?,
                SystemChoice::Slack => problem.slack_system()?,
            };
            ok(pretty(&sys.to_json()))
        }
        Command::Oracle => ok(pretty(&run_oracle(&problem)?)),
        Command::Solve => {
            let report = solve(&problem, manifest)?;
            ok(pretty(&report_to_json(&report, &problem)))
        }
        Command::Verify => {
            let path = manifest
                .overrides
                .report_path
                .as_ref()
                .ok_or_else(|| CliError::Validation("verify needs --report".into()))?;
            let doc: Value = serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(e.to_string()))?;
            let (summary, passed) = verify_report(&problem, &doc, manifest.overrides.newton_bound)?;
            Ok(Outcome { text: pretty(&summary), code: if passed { EXIT_OK } else { EXIT_VERIFICATION } })
        }
    }
}

/// Settings for the manifest: defaults for the problem plus overrides.
pub fn settings_for(problem: &ProblemConfig<f64>, manifest: &RunManifest) -> SolverSettings {
    let mut s = SolverSettings::for_problem(problem);
    s.seed = manifest.seed;
    if let Some(n) = manifest.overrides.starts {
        s.starts = n;
    }
    s.threads = manifest.overrides.threads;
    s.newton_bound = manifest.overrides.newton_bound;
    s
}

fn solve(problem: &ExactProblem, manifest: &RunManifest) -> Result<SolveReport, CliError> {
    let float = problem.to_f64();
    let settings = settings_for(&float, manifest);
    Ok(classify_report(find_critical_points(&float, &settings)?))
}

fn run_oracle(problem: &ExactProblem) -> Result<Value, CliError> {
    let ProblemConfig::Maxwell(cfg) = problem.to_f64() else {
        return Err(CliError::Validation("oracles exist for Maxwell problems only".into()));
    };
    let points: Vec<Value> = match (cfg.dim(), cfg.exponent()) {
        (2, 0) => complex_oracle_m0_d2(&cfg)?
            .into_iter()
            .map(|r| json!({"location": coords(&r.point), "multiplicity": r.multiplicity}))
            .collect(),
        (1, _) => line_oracle_d1(&cfg)?.iter().map(|p| json!({"location": coords(p), "multiplicity": 1})).collect(),
        _ => return Err(CliError::Validation("oracles need d = 2 with m = 0, or d = 1".into())),
    };
    let kind = if cfg.dim() == 2 { "complex" } else { "line" };
    Ok(json!({"oracle": kind, "count": points.len(), "points": points}))
}

fn coords(p: &[f64]) -> Vec<String> {
    p.iter().map(|&v| format_f64(v)).collect()
}

// ---------------------------------------------------------------------------
// Configuration documents

fn field_err(field: &str, msg: &str) -> CliError {
    CliError::Parse(format!("field `{field}`: {msg}"))
}

fn rational(v: &Value, field: &str) -> Result<Rational, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(field_err(field, "expected a number or a rational string")),
    };
    parse_rational(&text).ok_or_else(|| field_err(field, &format!("cannot read `{text}` as an exact rational")))
}

fn integer(obj: &Map<String, Value>, key: &str) -> Result<usize, CliError> {
    let v = obj.get(key).ok_or_else(|| field_err(key, "missing"))?;
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| field_err(key, "expected a nonnegative integer"))
}

fn rational_list(obj: &Map<String, Value>, key: &str) -> Result<Vec<Rational>, CliError> {
    let arr = obj.get(key).and_then(Value::as_array).ok_or_else(|| field_err(key, "expected an array"))?;
    arr.iter().enumerate().map(|(i, v)| rational(v, &format!("{key}[{i}]"))).collect()
}

fn site_list(obj: &Map<String, Value>, d: usize) -> Result<Vec<Point<Rational>>, CliError> {
    let arr = obj.get("sites").and_then(Value::as_array).ok_or_else(|| field_err("sites", "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| {
            let field = format!("sites[{i}]");
            let row = row.as_array().ok_or_else(|| field_err(&field, "expected an array of coordinates"))?;
            if row.len() != d {
                return Err(CliError::Validation(format!("{field} has {} coordinates but d = {d}", row.len())));
            }
            let c = row.iter().enumerate().map(|(k, v)| rational(v, &format!("{field}[{k}]"))).collect::<Result<_, _>>()?;
            Ok(Point::new(c))
        })
        .collect()
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str]) -> Result<(), CliError> {
    match obj.keys().find(|k| k.as_str() != "problem" && !allowed.contains(&k.as_str())) {
        Some(k) => Err(field_err(k, "unknown key")),
        None => Ok(()),
    }
}

fn convention(obj: &Map<String, Value>) -> Result<MassConvention, CliError> {
    match obj.get("convention") {
        None => Ok(MassConvention::Standard),
        Some(v) => match v.as_str() {
            Some("standard") | Some("STANDARD_mj") => Ok(MassConvention::Standard),
            Some("paper") | Some("AS_WRITTEN_mi") => Ok(MassConvention::AsWritten),
            _ => Err(field_err("convention", "expected \"standard\" or \"paper\"")),
        },
    }
}

/// Reads a configuration document. Numbers are kept as exact rationals.
pub fn parse_config(text: &str) -> Result<ExactProblem, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    config_from_value(&doc)
}

pub fn config_from_value(doc: &Value) -> Result<ExactProblem, CliError> {
    let obj = doc.as_object().ok_or_else(|| CliError::Parse("configuration must be a JSON object".into()))?;
    let kind = obj.get("problem").and_then(Value::as_str).ok_or_else(|| field_err("problem", "missing"))?;
    let d = || integer(obj, "d");
    let problem = match kind {
        "maxwell" => {
            check_keys(obj, &["d", "m", "sites", "charges"])?;
            let d = d()?;
            let m = u32::try_from(integer(obj, "m")?).map_err(|_| field_err("m", "too large"))?;
            ProblemConfig::Maxwell(MaxwellConfig::new(d, site_list(obj, d)?, rational_list(obj, "charges")?, m)?)
        }
        "sinr" => {
            check_keys(obj, &["d", "alpha", "noise", "powers", "sites", "focus", "beta"])?;
            let d = d()?;
            let alpha = u32::try_from(integer(obj, "alpha")?).map_err(|_| field_err("alpha", "too large"))?;
            let noise = rational(obj.get("noise").ok_or_else(|| field_err("noise", "missing"))?, "noise")?;
            let focus = integer(obj, "focus")?;
            if focus == 0 {
                return Err(CliError::Validation("focus is 1-based".into()));
            }
            let beta = obj.get("beta").map(|v| rational(v, "beta")).transpose()?;
            ProblemConfig::Sinr(SinrConfig::new(
                d,
                site_list(obj, d)?,
                rational_list(obj, "powers")?,
                alpha,
                noise,
                focus - 1,
                beta,
            )?)
        }
        "newton" => {
            check_keys(obj, &["d", "sites", "masses"])?;
            let d = d()?;
            ProblemConfig::Newton(NewtonConfig::new(d, site_list(obj, d)?, rational_list(obj, "masses")?)?)
        }
        "central" => {
            check_keys(obj, &["d", "n", "masses", "convention"])?;
            let masses = rational_list(obj, "masses")?;
            if let Some(n) = obj.get("n") {
                if n.as_u64() != Some(masses.len() as u64) {
                    return Err(CliError::Validation(format!("n = number of masses ({})", masses.len())));
                }
            }
            ProblemConfig::Central(CentralConfig::new(d()?, masses, convention(obj)?)?)
        }
        other => return Err(field_err("problem", &format!("unknown problem `{other}`"))),
    };
    Ok(problem)
}

fn exact_list(v: &[Rational]) -> Vec<String> {
    v.iter().map(Scalar::to_coeff_string).collect()
}

fn exact_sites(sites: &[Point<Rational>]) -> Vec<Vec<String>> {
    sites.iter().map(|p| exact_list(p)).collect()
}

/// The configuration as a document that `parse_config` reads back exactly.
pub fn config_to_value(problem: &ExactProblem) -> Value {
    match problem {
        ProblemConfig::Maxwell(c) => json!({
            "problem": "maxwell", "d": c.dim(), "m": c.exponent(),
            "sites": exact_sites(c.sites()), "charges": exact_list(c.charges()),
        }),
        ProblemConfig::Sinr(c) => {
            let mut v = json!({
                "problem": "sinr", "d": c.dim(), "alpha": c.alpha(), "noise": c.noise().to_coeff_string(),
                "powers": exact_list(c.powers()), "sites": exact_sites(c.sites()), "focus": c.focus() + 1,
            });
            if let Some(b) = c.beta() {
                v["beta"] = json!(b.to_coeff_string());
            }
            v
        }
        ProblemConfig::Newton(c) => json!({
            "problem": "newton", "d": c.dim(), "sites": exact_sites(c.sites()), "masses": exact_list(c.masses()),
        }),
        ProblemConfig::Central(c) => json!({
            "problem": "central", "d": c.dim(), "n": c.n(), "masses": exact_list(c.masses()),
            "convention": match c.convention() {
                MassConvention::Standard => "standard",
                MassConvention::AsWritten => "paper",
            },
        }),
    }
}

// ---------------------------------------------------------------------------
// Reports

/// Serializes a report. Reals are 17-significant-digit strings.
pub fn report_to_json(report: &SolveReport, problem: &ExactProblem) -> Value {
    let s = &report.settings;
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| {
            json!({
                "clusterId": p.cluster_id,
                "location": coords(&p.location),
                "gradResidual": format_f64(p.grad_residual),
                "slackResidual": format_f64(p.slack_residual),
                "morseIndex": p.morse_index,
                "degenerate": p.degenerate,
                "hits": p.hits,
                "diameter": format_f64(p.diameter),
                "onContinuum": p.on_continuum,
            })
        })
        .collect();
    json!({
        "schemaVersion": SCHEMA_VERSION,
        "problem": config_to_value(problem),
        "settings": {
            "seed": s.seed,
            "starts": s.starts,
            "maxIter": s.max_iter,
            "residualTol": format_f64(s.residual_tol),
            "dedupRadius": format_f64(s.dedup_radius),
            "exclusionRadius": format_f64(s.exclusion_radius),
            "searchRegion": {"lo": coords(&s.search_region.lo), "hi": coords(&s.search_region.hi)},
            "newtonBound": match s.newton_bound {
                NewtonBoundVariant::Theorem => "theorem",
                NewtonBoundVariant::Summary => "summary",
            },
        },
        "points": points,
        "count": report.count,
        "bound": report.bound,
        "boundRespected": report.bound_respected,
        "continuumSuspected": report.continuum_suspected,
        "wallTime": report.wall_time,
    })
}

fn real_field(v: &Value, field: &str) -> Result<f64, CliError> {
    match v {
        Value::String(s) => s.trim().parse::<f64>().map_err(|_| field_err(field, "expected a real")),
        Value::Number(n) => n.as_f64().ok_or_else(|| field_err(field, "expected a real")),
        _ => Err(field_err(field, "expected a real")),
    }
}

/// Residuals recomputed from the configuration at `x`: relative gradient
/// (or central-equation) residual and slack-system residual.
fn recompute(problem: &ProblemConfig<f64>, x: &[f64], slack: &crate::FloatSystem) -> Result<(f64, f64), Error> {
    fn ratio<P: Potential<f64>>(pot: &P, x: &[f64]) -> Result<f64, Error> {
        let g = pot.gradient(x)?;
        Ok(norm(&g) / pot.gradient_scale(x)?)
    }
    let (grad, z) = match problem {
        ProblemConfig::Maxwell(c) => (ratio(c, x)?, point_with_slacks(c.sites(), x)),
        ProblemConfig::Sinr(c) => (ratio(c, x)?, x.to_vec()),
        ProblemConfig::Newton(c) => (ratio(c, x)?, point_with_slacks(c.sites(), x)),
        ProblemConfig::Central(c) => {
            let r = central_residual_flat(c, x)?;
            (norm(&r) / central_residual_scale(c, x)?, positions_with_slacks(c.n(), c.dim(), x))
        }
    };
    Ok((grad, slack.relative_residual(&z)?))
}

/// Checks a report document against the configuration without trusting
/// any stored residual. Returns a summary and whether everything passed.
pub fn verify_report(
    problem: &ExactProblem,
    doc: &Value,
    newton_bound: NewtonBoundVariant,
) -> Result<(Value, bool), CliError> {
    match doc.get("schemaVersion").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        other => return Err(CliError::Validation(format!("unsupported schemaVersion {other:?}"))),
    }
    let float = problem.to_f64();
    let defaults = SolverSettings::for_problem(&float);
    let settings = doc.get("settings").cloned().unwrap_or(Value::Null);
    let tol = match settings.get("residualTol") {
        Some(v) => real_field(v, "settings.residualTol")?,
        None => defaults.residual_tol,
    };
    let slack = float.slack_system()?;
    let sites: &[Point<f64>] = match &float {
        ProblemConfig::Maxwell(c) => c.sites(),
        ProblemConfig::Sinr(c) => c.sites(),
        ProblemConfig::Newton(c) => c.sites(),
        ProblemConfig::Central(_) => &[],
    };
    let dim = match &float {
        ProblemConfig::Central(c) => c.n() * c.dim(),
        other => other.dim(),
    };
    let points = doc.get("points").and_then(Value::as_array).ok_or_else(|| field_err("points", "expected an array"))?;
    let mut all_pass = true;
    let mut isolated = 0usize;
    let mut checked = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let field = format!("points[{i}].location");
        let loc = p.get("location").and_then(Value::as_array).ok_or_else(|| field_err(&field, "expected an array"))?;
        let x = loc.iter().map(|v| real_field(v, &field)).collect::<Result<Vec<f64>, _>>()?;
        if x.len() != dim {
            return Err(CliError::Validation(format!("{field} has {} coordinates, expected {dim}", x.len())));
        }
        if !p.get("onContinuum").and_then(Value::as_bool).unwrap_or(false) {
            isolated += 1;
        }
        let clear = sites.iter().all(|s| distance(s, &x) > defaults.exclusion_radius);
        let (grad, slack_res, pass) = match recompute(&float, &x, &slack) {
            Ok((g, sr)) => (Some(g), Some(sr), clear && g <= tol && sr < SLACK_TOL),
            Err(_) => (None, None, false),
        };
        all_pass &= pass;
        checked.push(json!({
            "index": i,
            "gradResidual": grad.map(format_f64),
            "slackResidual": slack_res.map(format_f64),
            "pass": pass,
        }));
    }
    let count = doc.get("count").and_then(Value::as_u64).ok_or_else(|| field_err("count", "expected an integer"))?;
    let bound = problem.bound(newton_bound)?;
    let count_ok = count as usize == isolated;
    let bound_ok = bound.value.admits(isolated);
    let passed = all_pass && count_ok && bound_ok;
    Ok((
        json!({
            "verified": passed,
            "points": checked,
            "count": count,
            "countMatchesPoints": count_ok,
            "bound": bound.value,
            "boundRespected": bound_ok,
        }),
        passed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAIR: &str = r#"{"problem":"maxwell","d":3,"m":1,"sites":[[-1,0,0],[1,0,0]],"charges":[1,1]}"#;

    #[test]
    fn parses_the_pair_fixture() {
        let p = parse_config(PAIR).unwrap();
        assert_eq!(p.kind(), "maxwell");
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn rationals_are_exact() {
        let p = parse_config(r#"{"problem":"newton","d":1,"sites":[[0.1],["1/3"]],"masses":[1e-1, 2]}"#).unwrap();
        let ProblemConfig::Newton(c) = &p else { panic!() };
        assert_eq!(c.sites()[0][0], Rational::new(1.into(), 10.into()));
        assert_eq!(c.sites()[1][0], Rational::new(1.into(), 3.into()));
        assert_eq!(c.masses()[0], Rational::new(1.into(), 10.into()));
        assert_eq!(parse_config(&config_to_value(&p).to_string()).unwrap(), p);
    }

    #[test]
    fn validation_errors_name_the_invariant() {
        let dup = r#"{"problem":"maxwell","d":2,"m":1,"sites":[[0,0],[0,0]],"charges":[1,1]}"#;
        let e = parse_config(dup).unwrap_err();
        assert!(matches!(&e, CliError::Validation(m) if m.contains("sites pairwise distinct")), "{e}");
        let odd = r#"{"problem":"sinr","d":2,"alpha":3,"noise":1,"powers":[1,1],"sites":[[0,0],[1,0]],"focus":1}"#;
        let e = parse_config(odd).unwrap_err();
        assert!(matches!(&e, CliError::Validation(m) if m.contains("α even")), "{e}");
        assert_eq!(e.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn unknown_keys_and_syntax_errors() {
        let e = parse_config(r#"{"problem":"newton","d":1,"sites":[[0]],"masses":[1],"mass":2}"#).unwrap_err();
        assert!(matches!(&e, CliError::Parse(m) if m.contains("`mass`")), "{e}");
        let e = parse_config("{\n  \"problem\": \"newton\",\n  \"d\": }").unwrap_err();
        assert!(matches!(&e, CliError::Parse(m) if m.contains("line 3")), "{e}");
        let e = parse_config(r#"{"problem":"newton","d":1,"sites":[["x"]],"masses":[1]}"#).unwrap_err();
        assert!(matches!(&e, CliError::Parse(m) if m.contains("sites[0][0]")), "{e}");
    }

    #[test]
    fn central_convention_override() {
        let p = parse_config(r#"{"problem":"central","d":2,"n":3,"masses":[1,2,3],"convention":"paper"}"#).unwrap();
        let ProblemConfig::Central(c) = p else { panic!() };
        assert_eq!(c.convention(), MassConvention::AsWritten);
        assert!(parse_config(r#"{"problem":"central","d":2,"n":2,"masses":[1,2,3]}"#).is_err());
    }
}
