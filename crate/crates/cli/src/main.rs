//! Command-line front end: diagrams, generator listings, verification
//! sweeps, canonicalization and expression of invariants. All structured
//! output is JSON with sorted keys and stable schemas (see the `schemas/`
//! directory); identical invocations produce byte-identical output.

use std::fmt::Write as _;
use std::process::ExitCode;

use serde_json::{json, Value};

use parinv_core::action::RationalMatrix;
use parinv_core::canonical::{canonical_form, express_in_generators, invariant_values};
use parinv_core::error::CoreError;
use parinv_core::poly::Polynomial;
use parinv_core::roots::{Composition, GeneratorSet};
use parinv_core::verify::{
    invariant_ring_dimension_estimate, sweep_independence, sweep_invariance, compositions_up_to,
};

mod logging {
    use std::sync::OnceLock;

    #[derive(PartialEq, PartialOrd)]
    pub enum Level {
        Error,
        Warn,
        Info,
        Debug,
    }

    pub fn level() -> &'static Level {
        static LEVEL: OnceLock<Level> = OnceLock::new();
        LEVEL.get_or_init(|| match std::env::var("PARINV_LOG").as_deref() {
            Ok("error") => Level::Error,
            Ok("info") => Level::Info,
            Ok("debug") => Level::Debug,
            _ => Level::Warn,
        })
    }

    pub fn warn(msg: &str) {
        if *level() >= Level::Warn {
            eprintln!("warning: {msg}");
        }
    }

    pub fn info(msg: &str) {
        if *level() >= Level::Info {
            eprintln!("info: {msg}");
        }
    }
}

const USAGE: &str = "usage: parinv <command> [flags]

commands:
  diagram       --blocks r1,r2,... [--format text|json] [--output PATH] [--max-n N]
  generators    --blocks r1,r2,... [--format text|json] [--output PATH] [--max-n N]
  verify        [--n-max N] [--seed S] [--trials K] [--degree-bound D] [--output PATH]
  canonicalize  --blocks r1,r2,... --input matrix.json [--output PATH] [--max-n N]
  express       --blocks r1,r2,... --input poly.json [--output PATH] [--max-n N]

environment:
  PARINV_LOG    log level: error | warn | info | debug (default warn)
";

struct CliError {
    code: String,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: "usage".into(),
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            code: "io".into(),
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Default)]
struct Flags {
    blocks: Option<String>,
    input: Option<String>,
    output: Option<String>,
    format: Option<String>,
    seed: Option<u64>,
    n_max: Option<usize>,
    trials: Option<u32>,
    degree_bound: Option<u32>,
    max_n: Option<usize>,
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::usage(format!("flag {flag} expects a value")))
        };
        match flag.as_str() {
            "--blocks" => flags.blocks = Some(value()?),
            "--input" => flags.input = Some(value()?),
            "--output" => flags.output = Some(value()?),
            "--format" => flags.format = Some(value()?),
            "--seed" => {
                flags.seed = Some(value()?.parse().map_err(|_| {
                    CliError::usage("--seed expects an unsigned integer")
                })?)
            }
            "--n-max" => {
                flags.n_max = Some(value()?.parse().map_err(|_| {
                    CliError::usage("--n-max expects a positive integer")
                })?)
            }
            "--trials" => {
                flags.trials = Some(value()?.parse().map_err(|_| {
                    CliError::usage("--trials expects a positive integer")
                })?)
            }
            "--degree-bound" => {
                flags.degree_bound = Some(value()?.parse().map_err(|_| {
                    CliError::usage("--degree-bound expects a positive integer")
                })?)
            }
            "--max-n" => {
                flags.max_n = Some(value()?.parse().map_err(|_| {
                    CliError::usage("--max-n expects a positive integer")
                })?)
            }
            other => return Err(CliError::usage(format!("unknown flag {other}"))),
        }
    }
    Ok(flags)
}

/// Parse `--blocks`, enforcing the size limit (default 12; an explicit
/// --max-n raises it with a cost warning).
fn composition_from_flags(flags: &Flags) -> Result<Composition, CliError> {
    let spec = flags
        .blocks
        .as_deref()
        .ok_or_else(|| CliError::usage("--blocks is required"))?;
    let sizes: Result<Vec<usize>, _> = spec.split(',').map(|p| p.trim().parse()).collect();
    let sizes =
        sizes.map_err(|_| CoreError::BadComposition(format!("cannot parse sizes {spec:?}")))?;
    let comp = Composition::new(sizes)?;
    let limit = flags.max_n.unwrap_or(12);
    if comp.n() > limit {
        return Err(CoreError::BadComposition(format!(
            "n = {} exceeds the limit {limit}; pass --max-n to raise it",
            comp.n()
        ))
        .into());
    }
    if comp.n() > 12 {
        logging::warn(&format!(
            "n = {} is large; symbolic determinants grow quickly",
            comp.n()
        ));
    }
    Ok(comp)
}

fn read_input(flags: &Flags) -> Result<Value, CliError> {
    let path = flags
        .input
        .as_deref()
        .ok_or_else(|| CliError::usage("--input is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::io(format!("bad JSON in {path}: {e}")))
}

fn root_value_entries<V: std::fmt::Display>(
    values: &std::collections::BTreeMap<parinv_core::roots::Root, V>,
) -> Value {
    Value::Array(
        values
            .iter()
            .map(|(r, v)| json!({"root": r.as_json(), "value": v.to_string()}))
            .collect(),
    )
}

fn cmd_diagram(flags: &Flags) -> Result<String, CliError> {
    let comp = composition_from_flags(flags)?;
    let gens = GeneratorSet::new(comp)?;
    match flags.format.as_deref().unwrap_or("text") {
        "text" => Ok(gens.render_diagrams()),
        "json" => Ok(pretty(&gens.to_json())),
        other => Err(CliError::usage(format!("unknown format {other}"))),
    }
}

fn cmd_generators(flags: &Flags) -> Result<String, CliError> {
    let comp = composition_from_flags(flags)?;
    let gens = GeneratorSet::new(comp)?;
    let minors = gens.base_minors();
    let pair_invariants = gens.pair_invariants();
    let broad = gens.broad_invariants();
    match flags.format.as_deref().unwrap_or("text") {
        "text" => {
            let mut out = String::new();
            for (r, p) in &minors {
                writeln!(out, "M_{r} = {p}").unwrap();
            }
            for (r, p) in &pair_invariants {
                writeln!(out, "L_{r} = {p}").unwrap();
            }
            for (r, p) in &broad {
                writeln!(out, "N_{r} = {p}").unwrap();
            }
            Ok(out)
        }
        "json" => {
            let entry = |(r, p): &(parinv_core::roots::Root, Polynomial)| {
                json!({"root": r.as_json(), "text": p.to_string(), "terms": p.to_json()})
            };
            let v = json!({
                "composition": gens.composition().as_json(),
                "minors": Value::Array(minors.iter().map(entry).collect()),
                "pair_invariants": Value::Array(pair_invariants.iter().map(entry).collect()),
                "broad_generators": Value::Array(broad.iter().map(entry).collect()),
            });
            Ok(pretty(&v))
        }
        other => Err(CliError::usage(format!("unknown format {other}"))),
    }
}

/// Exit status is nonzero when any check fails.
fn cmd_verify(flags: &Flags) -> Result<(String, bool), CliError> {
    let n_max = flags.n_max.unwrap_or(8);
    let seed = flags.seed.unwrap_or(42);
    let trials = flags.trials.unwrap_or(3);
    logging::info(&format!("verify sweep up to n = {n_max}, seed {seed}"));

    let (compositions_checked, failures) = sweep_invariance(n_max);
    let records = sweep_independence(n_max, trials, seed);

    let mut ok = failures.is_empty() && records.iter().all(|r| r.certified());

    let mut report = json!({
        "n_max": n_max,
        "seed": seed,
        "trials": trials,
        "compositions_checked": compositions_checked,
        "invariance_failures": Value::Array(
            failures
                .iter()
                .map(|f| {
                    json!({
                        "composition": f.composition,
                        "label": f.label,
                        "group": f.group.label(),
                        "generator": f.generator.as_json(),
                    })
                })
                .collect()
        ),
        "independence_certificates": Value::Array(
            records
                .iter()
                .map(|r| {
                    json!({
                        "composition": r.composition,
                        "family": r.family,
                        "rank": r.rank,
                        "expected": r.expected,
                        "trials_used": r.trials_used,
                        "certified": r.certified(),
                    })
                })
                .collect()
        ),
    });

    if let Some(degree_bound) = flags.degree_bound {
        let mut checks = Vec::new();
        for sizes in compositions_up_to(n_max.min(5)) {
            let gens = GeneratorSet::from_sizes(sizes.clone())?;
            let estimate = invariant_ring_dimension_estimate(&gens, degree_bound, 4, seed);
            let matches = estimate == gens.broad().len();
            ok = ok && matches;
            checks.push(json!({
                "composition": sizes,
                "degree_bound": degree_bound,
                "estimate": estimate,
                "broad_size": gens.broad().len(),
                "matches": matches,
            }));
        }
        report["dimension_checks"] = Value::Array(checks);
    }

    Ok((pretty(&report), ok))
}

fn cmd_canonicalize(flags: &Flags) -> Result<String, CliError> {
    let comp = composition_from_flags(flags)?;
    let input = read_input(flags)?;
    let x = RationalMatrix::from_json(&comp, &input)?;
    let gens = GeneratorSet::new(comp)?;
    let values = invariant_values(&gens, &x)?;
    let canon = canonical_form(&gens, &x)?;
    let v = json!({
        "composition": gens.composition().as_json(),
        "canonical": root_value_entries(canon.coords()),
        "invariants": root_value_entries(values.values()),
    });
    Ok(pretty(&v))
}

fn cmd_express(flags: &Flags) -> Result<String, CliError> {
    let comp = composition_from_flags(flags)?;
    let input = read_input(flags)?;
    let f = Polynomial::from_json(&input)?;
    let gens = GeneratorSet::new(comp)?;
    let expr = express_in_generators(&gens, &f)?;
    let v = json!({
        "composition": gens.composition().as_json(),
        "numerator": expr.numerator.to_string(),
        "denominator": expr.denominator.to_string(),
        "numerator_terms": expr.numerator.to_json(),
        "denominator_terms": expr.denominator.to_json(),
    });
    Ok(pretty(&v))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization");
    s.push('\n');
    s
}

fn deliver(flags: &Flags, payload: &str) -> Result<(), CliError> {
    match flags.output.as_deref() {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::io(format!("cannot write {path}: {e}"))),
    }
}

fn run() -> Result<bool, CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        return Err(CliError::usage(USAGE.trim_end()));
    };
    let flags = parse_flags(&args[1..])?;
    let (payload, ok) = match command.as_str() {
        "diagram" => (cmd_diagram(&flags)?, true),
        "generators" => (cmd_generators(&flags)?, true),
        "verify" => cmd_verify(&flags)?,
        "canonicalize" => (cmd_canonicalize(&flags)?, true),
        "express" => (cmd_express(&flags)?, true),
        "help" | "--help" | "-h" => (format!("{USAGE}"), true),
        other => return Err(CliError::usage(format!("unknown command {other}\n\n{USAGE}"))),
    };
    deliver(&flags, &payload)?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            let v = json!({"error": {"code": e.code, "message": e.message}});
            eprintln!("{}", serde_json::to_string(&v).expect("JSON serialization"));
            ExitCode::FAILURE
        }
    }
}
