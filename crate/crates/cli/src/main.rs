use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bethe_qpoly::bethe::{check_admissible, check_generic, check_regular, check_weights, residuals_at_roots, BetheSolution, BetheSystem, WeightMode};
use bethe_qpoly::diffop::{bethe_operator, factorize_operator, fundamental_operator};
use bethe_qpoly::json as js;
use bethe_qpoly::qpoly::identities::run_suite;
use bethe_qpoly::reconstruct::{collection_to_bethe, compute_frame, reconstruct_collection, verify_preframe, Preframe, PreframeReport};
use bethe_qpoly::{roundtrip, Field, FieldConfig, Mode};

#[derive(Parser)]
#[command(name = "bqp", version, about = "Exact Bethe ansatz / quasi-polynomial / q-difference operator toolkit")]
struct Cli {
    /// `generic` or `cyclotomic:m` (Q a primitive m-th root of unity).
    #[arg(long, global = true, default_value = "generic")]
    field: String,
    /// Exponent denominator D: exponents live in (1/D)Z and q = Q^D.
    #[arg(long, global = true, default_value_t = 1)]
    denominator: u32,
    /// Input JSON file; `-` or absent reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; absent writes stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    max_k: Option<usize>,
    #[arg(long, global = true)]
    instances: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Admissible / regular / generic verdicts for `{system, solution}`.
    Check,
    /// Collection of quasi-polynomials from `{system, solution}`.
    Reconstruct,
    /// Bethe data from `{collection, preframe?}`.
    Forward,
    /// `D_U` from `{collection}` or `D^t` from `{system, solution}`.
    Operator,
    /// Frame of `{collection}` (or a bare collection object).
    Frame,
    /// Randomized collection → Bethe → collection loop, N = 2..=max-k.
    Roundtrip,
    /// Determinant identity suite and the complementary-minor pattern search.
    Selftest,
}

fn field(cli: &Cli) -> bethe_qpoly::Result<Field> {
    let mode: Mode = cli.field.parse()?;
    Field::new(FieldConfig { mode, denominator: cli.denominator })
}

fn read_input(cli: &Cli) -> anyhow::Result<Value> {
    let mut text = String::new();
    match &cli.input {
        Some(p) if p.as_os_str() != "-" => {
            text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    serde_json::from_str(&text).map_err(|e| bethe_qpoly::Error::Schema(format!("invalid JSON: {e}")).into())
}

/// The object under `key`, or the whole payload when it has no such key.
fn part<'a>(v: &'a Value, key: &str) -> &'a Value {
    v.get(key).unwrap_or(v)
}

fn bethe_input(f: &Field, v: &Value) -> anyhow::Result<(BetheSystem, BetheSolution)> {
    let (Some(sys), Some(sol)) = (v.get("system"), v.get("solution")) else {
        return Err(bethe_qpoly::Error::Schema("expected {\"system\": .., \"solution\": ..}".into()).into());
    };
    Ok((js::system_from_json(f, sys)?, js::solution_from_json(f, sol)?))
}

fn preframe_report(r: &PreframeReport) -> Value {
    json!({
        "holds": r.holds,
        "failing_subset": r.failing_subset,
        "constant": r.constant.as_ref().map(js::scalar_to_json),
    })
}

fn check(f: &Field, v: &Value) -> anyhow::Result<Value> {
    let (sys, sol) = bethe_input(f, v)?;
    let reg = check_regular(f, &sol, &sys)?;
    let mut certs = json!({
        "quotients": reg.quotients.iter().map(|q| q.as_ref().map(js::poly_to_json)).collect::<Vec<_>>(),
        "generic_weights": check_weights(f, &sys.lambda, WeightMode::Generic),
        "dominance_free_weights": check_weights(f, &sys.lambda, WeightMode::DominanceFree),
    });
    if sol.roots.is_some() {
        let res = residuals_at_roots(f, &sol, &sys)?;
        certs["residuals_at_roots"] = Value::Array(res.iter().map(js::scalar_to_json).collect());
    }
    Ok(json!({
        "admissible": check_admissible(f, &sol),
        "regular": reg.regular,
        "generic": check_generic(&sol, &sys),
        "certificates": certs,
    }))
}

fn reconstruct(f: &Field, v: &Value) -> anyhow::Result<Value> {
    let (sys, sol) = bethe_input(f, v)?;
    let rec = reconstruct_collection(f, &sol, &sys)?;
    let t = Preframe::from_system(&sys);
    Ok(json!({
        "collection": js::collection_to_json(&rec.collection),
        "y": rec.y.iter().map(js::qp_to_json).collect::<Vec<_>>(),
        "preframe": js::preframe_to_json(&t),
        "preframe_report": preframe_report(&verify_preframe(f, &rec.collection, &t)),
    }))
}

fn forward(f: &Field, v: &Value) -> anyhow::Result<Value> {
    let u = js::collection_from_json(f, part(v, "collection"))?;
    let t = match v.get("preframe") {
        Some(t) => js::preframe_from_json(f, t)?,
        None => {
            let t = compute_frame(f, &u)?;
            if !t.t.last().is_some_and(|p| p.is_one()) {
                bail!(bethe_qpoly::Error::Precondition("the frame has T_N != 1; divide the collection by T_N first".into()));
            }
            t
        }
    };
    let fwd = collection_to_bethe(f, &u, &t)?;
    Ok(json!({
        "system": js::system_to_json(&fwd.system),
        "solution": js::solution_to_json(&fwd.solution),
        "constants": fwd.constants.iter().map(js::scalar_to_json).collect::<Vec<_>>(),
    }))
}

fn operator(f: &Field, v: &Value) -> anyhow::Result<Value> {
    if v.get("system").is_some() {
        let (sys, sol) = bethe_input(f, v)?;
        let fac = bethe_operator(f, &sol, &sys)?;
        return Ok(js::operator_to_json(&fac.expand(f), Some(&fac)));
    }
    let u = js::collection_from_json(f, part(v, "collection"))?;
    let d = fundamental_operator(f, &u)?;
    let fac = factorize_operator(f, &u).ok();
    Ok(js::operator_to_json(&d, fac.as_ref()))
}

fn frame(f: &Field, v: &Value) -> anyhow::Result<Value> {
    let u = js::collection_from_json(f, part(v, "collection"))?;
    let t = compute_frame(f, &u)?;
    let mut out = js::preframe_to_json(&t);
    out["report"] = preframe_report(&verify_preframe(f, &u, &t));
    Ok(out)
}

fn run_roundtrip(cli: &Cli, f: &Field) -> Value {
    let max_n = cli.max_k.unwrap_or(3).max(2);
    let count = cli.instances.unwrap_or(25);
    let plan: Vec<(usize, usize)> = (2..=max_n).map(|n| (n, if n >= 4 { count.div_ceil(5) } else { count })).collect();
    let rep = roundtrip::run(f, cli.seed, &plan, 3);
    let mut v = serde_json::to_value(&rep).expect("report serializes");
    v["all_passed"] = json!(rep.all_passed());
    v
}

fn run(cli: &Cli) -> anyhow::Result<(Value, bool)> {
    let f = field(cli)?;
    let out = match cli.command {
        Command::Roundtrip => {
            let v = run_roundtrip(cli, &f);
            let ok = v["all_passed"].as_bool() == Some(true);
            return Ok((v, ok));
        }
        Command::Selftest => {
            let rep = run_suite(&f, cli.seed, cli.max_k.unwrap_or(4), cli.instances.unwrap_or(100), 50);
            let ok = rep.all_passed;
            return Ok((serde_json::to_value(&rep)?, ok));
        }
        Command::Check => check(&f, &read_input(cli)?)?,
        Command::Reconstruct => reconstruct(&f, &read_input(cli)?)?,
        Command::Forward => forward(&f, &read_input(cli)?)?,
        Command::Operator => operator(&f, &read_input(cli)?)?,
        Command::Frame => frame(&f, &read_input(cli)?)?,
    };
    Ok((out, true))
}

fn error_object(e: &anyhow::Error) -> Value {
    match e.downcast_ref::<bethe_qpoly::Error>() {
        Some(err) => js::error_to_json(err),
        None => json!({ "error": { "kind": "Io", "message": format!("{e:#}") } }),
    }
}

fn emit(cli: &Cli, v: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match &cli.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok((v, true)) => (v, ExitCode::SUCCESS),
        Ok((v, false)) => (v, ExitCode::from(1)),
        Err(e) => {
            let schema = matches!(e.downcast_ref::<bethe_qpoly::Error>(), Some(bethe_qpoly::Error::Schema(_) | bethe_qpoly::Error::Parse(_)));
            (error_object(&e), ExitCode::from(if schema { 2 } else { 1 }))
        }
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("bqp: {e:#}");
        return ExitCode::from(1);
    }
    code
}
