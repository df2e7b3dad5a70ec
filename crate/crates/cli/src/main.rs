//! Command-line front end: parse JSON job inputs, run one operation from the
//! library, print a canonical JSON report. Exit codes: 0 success, 1 syntax
//! or validation error, 2 capacity, 3 property violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use desingular::derive::{coefficient_ideal, coefficient_ideal_normal_variant};
use desingular::descent::{descend, order_invariance_report};
use desingular::diagram::{diagram_of_ideal, hilbert_samuel_at_point};
use desingular::ideal::truncation_basis;
use desingular::marked::{Chart, Divisor, DivisorOrigin, MarkedIdeal};
use desingular::parse::parse_polynomial;
use desingular::resolve::{
    bennett_check, check_pullback_generic_fibre, check_pullback_product_line,
    resolve_maximal_order, ResolveOptions,
};
use desingular::transform::{controlled_transform, equivalence_check};
use desingular::{
    BlowupCenter, CandidatePolicy, Equivalence, Error, FieldElem, GroundField, Ideal,
    Monomial, Polynomial,
};

#[derive(Parser)]
#[command(name = "desingular", version, about = "Marked-ideal calculus on affine charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Path to the JSON job input (omit to read standard input).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Truncation level for diagrams and Hilbert-Samuel prefixes.
    #[arg(long, global = true, default_value_t = 8)]
    kmax: u32,
    /// Depth bound for test-sequence exploration.
    #[arg(long, global = true, default_value_t = 2)]
    depth: u32,
    /// Blow-up budget for the resolution driver.
    #[arg(long, global = true, default_value_t = 32)]
    step_cap: usize,
    /// Permit codimension-one centres in the driver.
    #[arg(long, global = true)]
    allow_divisorial: bool,
    /// Print the full JSON report (default prints a one-line summary).
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Diagram of initial exponents and the H prefix of an ideal.
    Diagram,
    /// Hilbert-Samuel function at a point, with a per-level cross-check.
    Hs,
    /// One controlled transform: all charts of a blow-up.
    Blowup,
    /// Run the resolution driver and print the trace.
    Resolve,
    /// Coefficient ideal (normal variant when `contact_var` is given).
    Coeff,
    /// Descend coefficients to a model over Q.
    Descend,
    /// Run one named property check.
    Check {
        /// product-line | generic-fibre | bennett | equivalence | order-invariance
        property: String,
    },
    /// Run a list of jobs and aggregate the verdicts.
    Corpus {
        /// Path to the JSON job list.
        list: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{}", summary_line(&report));
            }
            if report.get("verdict").and_then(Value::as_str) == Some("fail") {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) | Error::StepCap(_) => 2,
        Error::DivisibilityFailure
        | Error::RoundTripFailure
        | Error::CenterHNotConstant
        | Error::InvalidEmbedding
        | Error::NotMaximalOrder => 3,
        _ => 1,
    }
}

fn summary_line(report: &Value) -> String {
    if let Some(v) = report.get("verdict").and_then(Value::as_str) {
        let claim = report
            .get("claim")
            .and_then(Value::as_str)
            .unwrap_or("check");
        return format!("{}: {}", claim, v);
    }
    serde_json::to_string(report).unwrap()
}

fn run(cli: &Cli) -> Result<Value, Error> {
    let input = read_input(cli)?;
    let opts = ResolveOptions {
        step_cap: cli.step_cap,
        allow_divisorial: cli.allow_divisorial,
    };
    match &cli.command {
        Command::Diagram => cmd_diagram(&input, cli.kmax),
        Command::Hs => cmd_hs(&input, cli.kmax),
        Command::Blowup => cmd_blowup(&input, cli.allow_divisorial),
        Command::Resolve => {
            let m = marked_from_json(&input)?;
            let trace = resolve_maximal_order(&m, &opts)?;
            Ok(trace.to_json())
        }
        Command::Coeff => cmd_coeff(&input),
        Command::Descend => cmd_descend(&input),
        Command::Check { property } => run_check(property, &input, cli.kmax, cli.depth, &opts),
        Command::Corpus { list } => cmd_corpus(list, cli, &opts),
    }
}

fn read_input(cli: &Cli) -> Result<Value, Error> {
    let text = match (&cli.input, &cli.command) {
        (_, Command::Corpus { .. }) => return Ok(Value::Null),
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read input: {}", e)))?,
        (None, _) => {
            use std::io::Read;
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Invalid(format!("cannot read standard input: {}", e)))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Syntax {
        pos: e.column(),
        msg: format!("invalid JSON: {}", e),
    })
}

// ---------- input decoding ----------

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, Error> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Invalid(format!("missing string field `{}`", key)))
}

fn string_list(v: &Value, key: &str) -> Result<Vec<String>, Error> {
    match v.get(key) {
        None => Ok(vec![]),
        Some(Value::Array(items)) => items
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Invalid(format!("`{}` must hold strings", key)))
            })
            .collect(),
        Some(_) => Err(Error::Invalid(format!("`{}` must be an array", key))),
    }
}

fn field_from_json(v: &Value) -> Result<GroundField, Error> {
    let Some(spec) = v.get("field") else {
        return Ok(GroundField::rationals());
    };
    match str_field(spec, "kind")? {
        "Q" => Ok(GroundField::rationals()),
        "fraction" => {
            let params = string_list(spec, "params")?;
            let qf = GroundField::rationals();
            let prime: Result<Vec<Polynomial>, Error> = string_list(spec, "prime")?
                .iter()
                .map(|s| parse_polynomial(s, &params, &qf))
                .collect();
            GroundField::fraction(params, prime?, false)
        }
        other => Err(Error::Invalid(format!("unknown field kind `{}`", other))),
    }
}

fn ideal_from_json(v: &Value) -> Result<Ideal, Error> {
    let field = field_from_json(v)?;
    let vars = string_list(v, "vars")?;
    if vars.is_empty() {
        return Err(Error::Invalid("`vars` must be nonempty".into()));
    }
    let gens: Result<Vec<Polynomial>, Error> = string_list(v, "gens")?
        .iter()
        .map(|s| parse_polynomial(s, &vars, &field))
        .collect();
    Ideal::new(field, vars, gens?)
}

fn divisors_from_json(v: &Value) -> Result<Vec<Divisor>, Error> {
    let Some(Value::Array(items)) = v.get("E") else {
        return Ok(vec![]);
    };
    items
        .iter()
        .map(|e| {
            let var = str_field(e, "gen")?.to_string();
            let index = e
                .get("index")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Invalid("divisor needs an `index`".into()))?
                as usize;
            let origin = match str_field(e, "origin")? {
                "original" => DivisorOrigin::Original(index),
                "exceptional" => DivisorOrigin::Exceptional(index),
                "horizontal" => DivisorOrigin::Horizontal(index),
                other => {
                    return Err(Error::Invalid(format!("unknown origin `{}`", other)))
                }
            };
            Ok(Divisor { var, origin })
        })
        .collect()
}

fn marked_from_json(v: &Value) -> Result<MarkedIdeal, Error> {
    let ideal = ideal_from_json(v)?;
    let chart = Chart::new(ideal.field().clone(), ideal.vars().to_vec());
    let n_vanishing = string_list(v, "N")?;
    let divisors = divisors_from_json(v)?;
    let d = v.get("d").and_then(Value::as_u64).unwrap_or(1) as u32;
    MarkedIdeal::new(chart, n_vanishing, divisors, ideal, d)
}

fn point_from_json(v: &Value, field: &GroundField, n: usize) -> Result<Vec<FieldElem>, Error> {
    let coords = string_list(v, "point")?;
    if coords.is_empty() {
        return Ok((0..n).map(|_| field.zero()).collect());
    }
    if coords.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            coords.len(),
            n
        )));
    }
    coords
        .iter()
        .map(|s| {
            parse_polynomial(s, &[], field)?
                .constant_value()
                .ok_or_else(|| Error::Invalid("point coordinates must be constants".into()))
        })
        .collect()
}

// ---------- subcommands ----------

fn cmd_diagram(input: &Value, kmax: u32) -> Result<Value, Error> {
    let ideal = ideal_from_json(input)?;
    let diagram = diagram_of_ideal(&ideal, kmax)?;
    let h: Vec<u64> = (0..=kmax)
        .map(|k| desingular::diagram::h_of_diagram(&diagram, k))
        .collect();
    Ok(json!({
        "n": diagram.n,
        "vertices": diagram.vertices.iter().map(|m| m.0.clone()).collect::<Vec<_>>(),
        "certified_bound": diagram.certified_bound,
        "stable": diagram.stable,
        "H": h,
    }))
}

fn cmd_hs(input: &Value, kmax: u32) -> Result<Value, Error> {
    let ideal = ideal_from_json(input)?;
    let point = point_from_json(input, ideal.field(), ideal.vars().len())?;
    let h = hilbert_samuel_at_point(&ideal, &point, kmax)?;
    let prefix = h.prefix(kmax)?;
    // cross-check each level against the truncation pivot count
    let translated: Vec<Polynomial> =
        ideal.gens().iter().map(|g| g.translate(&point)).collect();
    let ideal0 = Ideal::new(ideal.field().clone(), ideal.vars().to_vec(), translated)?;
    let n = ideal.vars().len();
    let mut oracle = Vec::new();
    for k in 0..=kmax {
        let pivots = truncation_basis(&ideal0, k)?;
        let total = Monomial::all_up_to_degree(n, k).len() as u64;
        oracle.push(total - pivots.iter().filter(|m| m.degree() <= k).count() as u64);
    }
    let agree = oracle == prefix;
    Ok(json!({
        "H": prefix,
        "oracle": oracle,
        "claim": "hs-cross-check",
        "verdict": if agree { "pass" } else { "fail" },
    }))
}

fn cmd_blowup(input: &Value, allow_divisorial: bool) -> Result<Value, Error> {
    let m = marked_from_json(input)?;
    let center = BlowupCenter::new(string_list(input, "center")?);
    let charts = controlled_transform(&m, &center, allow_divisorial)?;
    Ok(json!({
        "center": center.vars,
        "charts": charts
            .iter()
            .map(|c| {
                json!({
                    "exceptional_var": c.exceptional_var,
                    "marked": c.marked.as_ref().map(|m| m.to_json()).unwrap_or(Value::Null),
                })
            })
            .collect::<Vec<_>>(),
    }))
}

fn cmd_coeff(input: &Value) -> Result<Value, Error> {
    let m = marked_from_json(input)?;
    let out = match input.get("contact_var").and_then(Value::as_str) {
        Some(v) => coefficient_ideal_normal_variant(&m, v)?,
        None => coefficient_ideal(&m)?,
    };
    Ok(out.to_json())
}

fn cmd_descend(input: &Value) -> Result<Value, Error> {
    let m = marked_from_json(input)?;
    let model = descend(&m)?;
    let mut report = model.to_json();
    // descend() verifies the round trip internally; reaching this point
    // means it held
    report
        .as_object_mut()
        .unwrap()
        .insert("round_trip".into(), Value::Bool(true));
    Ok(report)
}

fn run_check(
    property: &str,
    input: &Value,
    kmax: u32,
    depth: u32,
    opts: &ResolveOptions,
) -> Result<Value, Error> {
    let (instance, pass): (Value, bool) = match property {
        "product-line" => {
            let m = marked_from_json(input)?;
            let k = input.get("k").and_then(Value::as_u64).unwrap_or(1) as usize;
            let rep = check_pullback_product_line(&m, k, kmax, opts)?;
            (
                json!({
                    "k": k,
                    "base_steps": rep.base.to_json(),
                    "pulled_back_steps": rep.pulled_back.to_json(),
                    "centers_match": rep.centers_match,
                    "hs_identity": rep.hs_identity,
                }),
                rep.centers_match && rep.hs_identity,
            )
        }
        "generic-fibre" => {
            let m = marked_from_json(input)?;
            let model = descend(&m)?;
            let rep = check_pullback_generic_fibre(&model, opts)?;
            (
                json!({
                    "total_steps": rep.total.to_json(),
                    "fibre_steps": rep.fibre.to_json(),
                    "skipped_steps": rep.skipped_steps,
                    "centers_match": rep.centers_match,
                }),
                rep.centers_match,
            )
        }
        "bennett" => {
            let ideal = ideal_from_json(input)?;
            let center = BlowupCenter::new(string_list(input, "center")?);
            let rep = bennett_check(&ideal, &center, kmax)?;
            (
                json!({
                    "h_center": rep.h_center,
                    "charts": rep.charts.iter().map(|c| json!({
                        "exceptional_var": c.exceptional_var,
                        "h_after": c.h_after,
                        "no_increase": c.no_increase,
                    })).collect::<Vec<_>>(),
                }),
                rep.ok,
            )
        }
        "equivalence" => {
            let a = marked_from_json(
                input
                    .get("a")
                    .ok_or_else(|| Error::Invalid("missing `a`".into()))?,
            )?;
            let b = match input.get("b") {
                Some(bv) => marked_from_json(bv)?,
                None => coefficient_ideal(&a)?,
            };
            let verdict = equivalence_check(&a, &b, depth, &CandidatePolicy::AllSubspaces)?;
            let (desc, pass) = match &verdict {
                Equivalence::EquivalentToDepth(d) => {
                    (json!({ "equivalent_to_depth": d }), true)
                }
                Equivalence::NotEquivalent { witness } => {
                    (json!({ "witness": witness }), false)
                }
            };
            (desc, pass)
        }
        "order-invariance" => {
            let m = marked_from_json(input)?;
            let model = descend(&m)?;
            let rep = order_invariance_report(&model, kmax)?;
            (
                json!({
                    "fibre_order": rep.fibre_order,
                    "upstairs_order": rep.upstairs_order,
                }),
                rep.agree,
            )
        }
        other => {
            return Err(Error::Invalid(format!("unknown property `{}`", other)));
        }
    };
    Ok(json!({
        "claim": property,
        "instances": [ {
            "input": input,
            "expected": "pass",
            "got": instance,
            "verdict": if pass { "pass" } else { "fail" },
        } ],
        "verdict": if pass { "pass" } else { "fail" },
    }))
}

fn cmd_corpus(list: &PathBuf, cli: &Cli, opts: &ResolveOptions) -> Result<Value, Error> {
    let text = std::fs::read_to_string(list)
        .map_err(|e| Error::Invalid(format!("cannot read corpus list: {}", e)))?;
    let jobs: Value = serde_json::from_str(&text).map_err(|e| Error::Syntax {
        pos: e.column(),
        msg: format!("invalid JSON: {}", e),
    })?;
    let Some(jobs) = jobs.as_array() else {
        return Err(Error::Invalid("corpus list must be a JSON array".into()));
    };
    let mut instances = Vec::new();
    let mut all_pass = true;
    for job in jobs {
        let name = job
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or("unnamed")
            .to_string();
        let command = str_field(job, "command")?;
        let input = job.get("input").cloned().unwrap_or(Value::Null);
        let options = job.get("options").cloned().unwrap_or_else(|| json!({}));
        let kmax = options
            .get("kmax")
            .and_then(Value::as_u64)
            .map(|v| v as u32)
            .unwrap_or(cli.kmax);
        let depth = options
            .get("depth")
            .and_then(Value::as_u64)
            .map(|v| v as u32)
            .unwrap_or(cli.depth);
        let job_opts = ResolveOptions {
            step_cap: options
                .get("step_cap")
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .unwrap_or(opts.step_cap),
            allow_divisorial: options
                .get("allow_divisorial")
                .and_then(Value::as_bool)
                .unwrap_or(opts.allow_divisorial),
        };
        let got = match command {
            "diagram" => cmd_diagram(&input, kmax),
            "hs" => cmd_hs(&input, kmax),
            "blowup" => cmd_blowup(&input, job_opts.allow_divisorial),
            "resolve" => marked_from_json(&input)
                .and_then(|m| resolve_maximal_order(&m, &job_opts))
                .map(|t| t.to_json()),
            "coeff" => cmd_coeff(&input),
            "descend" => cmd_descend(&input),
            "check" => {
                let prop = str_field(job, "property")?;
                run_check(prop, &input, kmax, depth, &job_opts)
            }
            other => Err(Error::Invalid(format!("unknown command `{}`", other))),
        };
        let (got_value, verdict) = match got {
            Ok(v) => {
                let inner_fail =
                    v.get("verdict").and_then(Value::as_str) == Some("fail");
                let expected_ok = match job.get("expected") {
                    Some(exp) => subset_match(exp, &v),
                    None => true,
                };
                (v, !inner_fail && expected_ok)
            }
            Err(e) => (json!({ "error": e.to_string() }), false),
        };
        if !verdict {
            all_pass = false;
        }
        instances.push(json!({
            "input": name,
            "expected": job.get("expected").cloned().unwrap_or(Value::String("pass".into())),
            "got": got_value,
            "verdict": if verdict { "pass" } else { "fail" },
        }));
    }
    Ok(json!({
        "claim": "corpus",
        "cases": instances.len(),
        "instances": instances,
        "verdict": if all_pass { "pass" } else { "fail" },
    }))
}

/// Every key present in `expected` must match `got` exactly (recursively);
/// extra keys in `got` are fine.
fn subset_match(expected: &Value, got: &Value) -> bool {
    match (expected, got) {
        (Value::Object(e), Value::Object(g)) => e
            .iter()
            .all(|(k, v)| g.get(k).map_or(false, |gv| subset_match(v, gv))),
        (e, g) => e == g,
    }
}

// keep Map in scope for serde_json object manipulation
#[allow(unused)]
type JsonMap = Map<String, Value>;
