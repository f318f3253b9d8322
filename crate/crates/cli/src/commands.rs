use crate::output::{self, RunManifest};
use crate::{Cli, Command, Family, FormatArgs};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::path::Path;
use std::time::Instant;
use tensoreig::cohomology::{bott_support, vanishing_scan, BundleDescriptor};
use tensoreig::ed::ed_degree;
use tensoreig::eigen::{residual, solve_singular_tuples, SingularTuple, SolveConfig};
use tensoreig::fiber::fiber_dimension;
use tensoreig::harmonic::{harmonic_decompose, kernel_component};
use tensoreig::tensor::{read_tensor_file, AnyTensor, TensorFormat};

/// Sum of dims above which exact enumeration gets slow.
const BLOWUP_WARNING: u32 = 24;

/// Why a command did not finish normally.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable or malformed input: exit 2.
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A report and whether it records a contract violation (exit 3).
struct Outcome {
    report: Map<String, Value>,
    violation: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self::new(report, false)
    }

    fn new(report: Value, violation: bool) -> Self {
        match report {
            Value::Object(report) => Self { report, violation },
            _ => unreachable!("reports are JSON objects"),
        }
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> u8 {
    let start = Instant::now();
    let (name, seed) = describe(&cli.command);
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let manifest = RunManifest {
        command: name.into(),
        argv: argv.to_vec(),
        seed,
        version: tensoreig::VERSION.into(),
        duration_seconds: start.elapsed().as_secs_f64(),
        checksum: output::checksum(&outcome.report),
    };
    let value = output::finish(outcome.report, manifest);
    if cli.pretty {
        print!("{}", output::pretty(&value));
    } else {
        println!("{value}");
    }
    if outcome.violation {
        3
    } else {
        0
    }
}

fn describe(c: &Command) -> (&'static str, Option<u64>) {
    match c {
        Command::EdDegree(_) => ("ed-degree", None),
        Command::Solve { seed, .. } => ("solve", Some(*seed)),
        Command::FiberCheck { seed, .. } => ("fiber-check", *seed),
        Command::Harmonic { .. } => ("harmonic", None),
        Command::Bott { .. } => ("bott", None),
        Command::VanishingScan(_) => ("vanishing-scan", None),
        Command::ValidateFormat(_) => ("validate-format", None),
        Command::ReproducePaper { seed } => ("reproduce-paper", Some(*seed)),
    }
}

fn dispatch(c: &Command) -> Result<Outcome, Failure> {
    match c {
        Command::EdDegree(f) => ed_degree_cmd(f),
        Command::Solve {
            tensor,
            seed,
            max_restarts,
        } => solve_cmd(tensor, *seed, *max_restarts),
        Command::FiberCheck {
            tensor,
            seed,
            tuples,
        } => fiber_check_cmd(tensor, *seed, tuples.as_deref()),
        Command::Harmonic { tensor } => harmonic_cmd(tensor),
        Command::Bott { family, m, r, t } => bott_cmd(*family, *m, *r, *t),
        Command::VanishingScan(f) => vanishing_cmd(f),
        Command::ValidateFormat(f) => {
            let format = parse_format(f)?;
            Ok(Outcome::ok(serde_json::to_value(format.validate())?))
        }
        Command::ReproducePaper { seed } => reproduce_cmd(*seed),
    }
}

fn parse_format(f: &FormatArgs) -> Result<TensorFormat, Failure> {
    Ok(TensorFormat::new(f.degrees.clone(), f.dims.clone())?)
}

fn warn_if_large(format: &TensorFormat) {
    let total: u32 = format.dims().iter().sum();
    if total > BLOWUP_WARNING {
        eprintln!("warning: sum of dims is {total}; expect a long computation");
    }
}

fn ed_degree_cmd(f: &FormatArgs) -> Result<Outcome, Failure> {
    let format = parse_format(f)?;
    warn_if_large(&format);
    Ok(Outcome::ok(
        json!({ "ed_degree": ed_degree(&format).to_string() }),
    ))
}

fn load(path: &Path) -> Result<AnyTensor, Failure> {
    Ok(read_tensor_file(path)?)
}

fn tuple_json(t: &SingularTuple) -> Value {
    json!({
        "points": t.points,
        "residual": t.residual,
        "multiplicity": t.multiplicity,
    })
}

fn solve_cmd(path: &Path, seed: u64, max_restarts: Option<usize>) -> Result<Outcome, Failure> {
    let t = load(path)?.to_complex();
    let config = SolveConfig {
        max_restarts,
        ..SolveConfig::with_seed(seed)
    };
    let result = solve_singular_tuples(&t, &config);
    Ok(Outcome::ok(json!({
        "format": t.format(),
        "ed_degree": result.target.to_string(),
        "complete": result.complete,
        "found": result.tuples.len(),
        "restarts_used": result.restarts_used,
        "tuples": result.tuples.iter().map(tuple_json).collect::<Vec<_>>(),
    })))
}

/// Accepted tuple files: a bare array or a `solve` report. Each entry needs
/// only `points`.
#[derive(Deserialize)]
#[serde(untagged)]
enum TupleFile {
    Bare(Vec<TupleEntry>),
    Report { tuples: Vec<TupleEntry> },
}

#[derive(Deserialize)]
struct TupleEntry {
    points: Vec<Vec<Complex64>>,
}

fn read_tuples(path: &Path) -> Result<Vec<SingularTuple>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file: TupleFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let entries = match file {
        TupleFile::Bare(v) | TupleFile::Report { tuples: v } => v,
    };
    entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            SingularTuple::new(e.points)
                .ok_or_else(|| Failure::Input(format!("tuple {i} has a zero or non-finite block")))
        })
        .collect()
}

fn fiber_check_cmd(
    path: &Path,
    seed: Option<u64>,
    tuples: Option<&Path>,
) -> Result<Outcome, Failure> {
    let t = load(path)?.to_complex();
    let format = t.format().clone();
    let (tuples, solver) = match (tuples, seed) {
        (Some(file), _) => (read_tuples(file)?, Value::Null),
        (None, Some(seed)) => {
            let r = solve_singular_tuples(&t, &SolveConfig::with_seed(seed));
            let info = json!({
                "ed_degree": r.target.to_string(),
                "complete": r.complete,
                "found": r.tuples.len(),
                "restarts_used": r.restarts_used,
            });
            (r.tuples, info)
        }
        (None, None) => {
            return Err(Failure::Input(
                "either --seed or --tuples is required".into(),
            ))
        }
    };
    let max_tuple_residual = tuples.iter().map(|x| residual(&t, x)).fold(0.0, f64::max);
    let report = fiber_dimension(&format, &tuples)?;
    let validation = format.validate();
    let expected = validation
        .theorem_applicable
        .then(|| if format.all_even() { 2 } else { 1 });
    // an incomplete solve leaves the fiber underdetermined, not contradicted
    let solver_complete = solver
        .get("complete")
        .and_then(Value::as_bool)
        .unwrap_or(true);
    let violation = solver_complete && expected.is_some_and(|e| e != report.kernel_dimension());
    let mut value = serde_json::to_value(&report)?;
    let obj = value.as_object_mut().expect("report is an object");
    obj.insert("kernel_dimension".into(), json!(report.kernel_dimension()));
    obj.insert("expected_kernel_dimension".into(), json!(expected));
    obj.insert(
        "theorem_applicable".into(),
        json!(validation.theorem_applicable),
    );
    obj.insert(
        "input_residual".into(),
        json!(report.projection_residual(&t)),
    );
    obj.insert("max_tuple_residual".into(), json!(max_tuple_residual));
    obj.insert("contract_violation".into(), json!(violation));
    obj.insert("solver".into(), solver);
    Ok(Outcome::new(value, violation))
}

fn harmonic_cmd(path: &Path) -> Result<Outcome, Failure> {
    let t = match load(path)? {
        AnyTensor::Exact(t) => t,
        AnyTensor::Complex(_) => {
            return Err(Failure::Input(
                "harmonic needs exact (rational) coefficients".into(),
            ));
        }
    };
    let format = t.format();
    if format.k() != 1 {
        return Err(Failure::Input(format!(
            "harmonic needs a single block (got k = {})",
            format.k()
        )));
    }
    let d = format.degrees()[0];
    let dec = harmonic_decompose(t.polynomial(), d)?;
    let c = kernel_component(t.polynomial(), d)?;
    Ok(Outcome::ok(json!({
        "format": format,
        "degree": d,
        "components": dec.to_text(),
        "kernel_component": c.map(|c| c.to_string()),
    })))
}

fn bott_cmd(family: Family, m: u32, r: Option<u32>, t: i64) -> Result<Outcome, Failure> {
    let need_r = || r.ok_or_else(|| Failure::Input("--r is required for this family".into()));
    let bundle = match family {
        Family::Line => BundleDescriptor::line(m, t)?,
        Family::Omega => BundleDescriptor::cotangent(m, need_r()?, t)?,
        Family::Wedgeqq => BundleDescriptor::wedge_q_tensor_q(m, need_r()?, t)?,
    };
    let support = bott_support(&bundle);
    Ok(Outcome::ok(json!({
        "bundle": bundle,
        "support": support,
    })))
}

fn vanishing_cmd(f: &FormatArgs) -> Result<Outcome, Failure> {
    let format = parse_format(f)?;
    warn_if_large(&format);
    let validation = format.validate();
    let report = vanishing_scan(&format);
    let violation = validation.theorem_applicable && !report.all_clear;
    let mut value = serde_json::to_value(&report)?;
    let obj = value.as_object_mut().expect("report is an object");
    obj.insert("format".into(), serde_json::to_value(&format)?);
    obj.insert(
        "theorem_applicable".into(),
        json!(validation.theorem_applicable),
    );
    obj.insert("contract_violation".into(), json!(violation));
    Ok(Outcome::new(value, violation))
}

fn reproduce_cmd(seed: u64) -> Result<Outcome, Failure> {
    let criteria = tensoreig::battery::run_battery(seed);
    for c in &criteria {
        eprintln!("{}", c.line());
    }
    let all_passed = criteria.iter().all(|c| c.passed);
    // timings vary between runs; they go to stderr and the manifest only
    let criteria: Vec<Value> = criteria
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "title": c.title,
                "passed": c.passed,
                "budget_seconds": c.budget_seconds,
                "details": c.details,
            })
        })
        .collect();
    Ok(Outcome::new(
        json!({ "criteria": criteria, "all_passed": all_passed }),
        !all_passed,
    ))
}
