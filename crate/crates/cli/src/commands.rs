use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use sonc_core::certificate::{verify, SoncCertificate};
use sonc_core::circuit::detect_circuit;
use sonc_core::experiment::{attack, AttackConfig};
use sonc_core::polycore::{parse, BoxRegion};
use sonc_core::rational::{format_rational, parse_rational, Rational};
use sonc_core::separation::{
    log_convexity_numerator, log_convexity_witness, log_phi_min_second_difference,
    phi_identity_check, separation_bound, separation_bound_anchored, SeparationError,
    SeparationReport,
};

use crate::{BoundArgs, Cli, Command, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ALARM: u8 = 3;

const THREADS_ENV: &str = "SONC_SEP_THREADS";

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::CheckCircuit { poly, n, budget } => check_circuit(cli.format, poly, *n, *budget),
        Command::CheckCert { file } => {
            let text = fs::read_to_string(file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            check_cert(cli.format, &text)
        }
        Command::Bound(args) => bound(cli.format, args),
        Command::PhiAudit => phi_audit(cli.format),
        Command::Attack {
            bound,
            budget,
            restarts,
            parts,
            resolution,
            checkpoint_every,
        } => {
            let threads = match std::env::var(THREADS_ENV) {
                Ok(v) => Some(
                    v.trim()
                        .parse::<usize>()
                        .with_context(|| format!("{THREADS_ENV} must be a positive integer"))?,
                ),
                Err(_) => None,
            };
            let cfg = AttackConfig {
                seed: cli.seed,
                parts: *parts,
                budget: *budget,
                resolution: *resolution,
                restarts: *restarts,
                checkpoint_every: *checkpoint_every,
                threads,
                ..AttackConfig::default()
            };
            run_attack(cli, bound, &cfg)
        }
    }
}

/// `key,value` rows for flat summaries.
fn emit(format: Format, value: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Format::Csv => {
            println!("key,value");
            if let Value::Object(map) = value {
                for (k, v) in map {
                    let cell = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    println!("{k},\"{}\"", cell.replace('"', "\"\""));
                }
            }
        }
        Format::Text => {
            if let Value::Object(map) = value {
                for (k, v) in map {
                    match v {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
        }
    }
}

fn check_circuit(format: Format, text: &str, n: usize, budget: usize) -> Result<u8> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let f = parse(text, n).context("cannot parse polynomial")?;
    let mut out = serde_json::Map::new();
    out.insert("input".into(), json!(f.to_string()));
    out.insert("n".into(), json!(n));
    let circuit = match detect_circuit(&f) {
        Ok(c) => c,
        Err(e) => {
            out.insert("is_circuit".into(), json!(false));
            out.insert("reason_code".into(), json!(e.code()));
            out.insert("reason".into(), json!(e.to_string()));
            out.insert("verdict".into(), json!("not a circuit"));
            emit(format, &Value::Object(out));
            return Ok(EXIT_NEGATIVE);
        }
    };
    let power = circuit.circuit_number_power();
    let nonnegative = circuit.is_nonnegative();
    out.insert("is_circuit".into(), json!(true));
    out.insert("circuit".into(), serde_json::to_value(&circuit)?);
    out.insert("theta_q".into(), json!(format_rational(&power.theta_q)));
    out.insert("q".into(), json!(power.q));
    out.insert("theta_float".into(), json!(power.theta_f64()));
    out.insert("nonnegative".into(), json!(nonnegative));
    out.insert(
        "verdict".into(),
        json!(if nonnegative {
            "nonnegative"
        } else {
            "not nonnegative"
        }),
    );
    if !nonnegative {
        match circuit.find_negative_point(budget) {
            Some(p) => {
                let value = f.evaluate(&p)?;
                out.insert(
                    "negative_point".into(),
                    json!(p.iter().map(format_rational).collect::<Vec<_>>()),
                );
                out.insert("value_at_point".into(), json!(format_rational(&value)));
            }
            None => {
                out.insert("negative_point".into(), Value::Null);
            }
        }
    }
    emit(format, &Value::Object(out));
    Ok(if nonnegative { EXIT_OK } else { EXIT_NEGATIVE })
}

fn check_cert(format: Format, text: &str) -> Result<u8> {
    let cert = SoncCertificate::from_json(text).context("malformed certificate")?;
    let report = verify(&cert);
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("index,is_circuit,nonnegative,reason_code,theta_q,q,polynomial");
            for p in &report.parts {
                println!(
                    "{},{},{},{},{},{},\"{}\"",
                    p.index,
                    p.is_circuit,
                    p.nonnegative.map_or(String::new(), |b| b.to_string()),
                    p.reason_code.as_deref().unwrap_or(""),
                    p.theta_q.as_deref().unwrap_or(""),
                    p.q.map_or(String::new(), |q| q.to_string()),
                    p.polynomial
                );
            }
            println!("# ok={} residual={}", report.ok, report.residual);
        }
        Format::Text => {
            for p in &report.parts {
                let verdict = if p.ok() {
                    format!(
                        "ok (theta^q = {}, q = {})",
                        p.theta_q.as_deref().unwrap_or("?"),
                        p.q.unwrap_or(0)
                    )
                } else if let Some(code) = &p.reason_code {
                    format!("not a circuit: {code}")
                } else {
                    format!(
                        "not nonnegative (theta^q = {}, q = {})",
                        p.theta_q.as_deref().unwrap_or("?"),
                        p.q.unwrap_or(0)
                    )
                };
                println!("part {}: {} -- {verdict}", p.index, p.polynomial);
            }
            println!("residual: {}", report.residual);
            if let Some(i) = report.first_failure {
                println!("first failing part: {i}");
            }
            println!("ok: {}", report.ok);
        }
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn parse_region(args: &BoundArgs) -> Result<BoxRegion> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    let axes: Vec<(Rational, Rational)> = args
        .k
        .iter()
        .map(|s| {
            let (lo, hi) = s
                .split_once(':')
                .ok_or_else(|| anyhow!("box axis `{s}` must look like lo:hi"))?;
            Ok((
                parse_rational(lo).with_context(|| format!("bad lower end in `{s}`"))?,
                parse_rational(hi).with_context(|| format!("bad upper end in `{s}`"))?,
            ))
        })
        .collect::<Result<_>>()?;
    let axes = match axes.len() {
        1 => vec![axes[0].clone(); args.n],
        m if m == args.n => axes,
        m => bail!("--K given {m} times; expected 1 or n = {}", args.n),
    };
    Ok(BoxRegion::new(axes)?)
}

fn explain(e: SeparationError) -> anyhow::Error {
    match e {
        SeparationError::DegreeTooSmall(d) => {
            anyhow!("d = {d} is not allowed: the construction requires d >= 3")
        }
        SeparationError::OnesNotInterior => {
            anyhow!("the all-ones point is not in the interior of K; pass --anchor to rescale K")
        }
        other => anyhow!(other),
    }
}

struct BoundOutcome {
    report: SeparationReport,
    extra: serde_json::Map<String, Value>,
}

fn compute_bound(args: &BoundArgs) -> Result<BoundOutcome> {
    let region = parse_region(args)?;
    if args.d < 3 {
        return Err(explain(SeparationError::DegreeTooSmall(args.d)));
    }
    let u = args
        .u
        .as_deref()
        .map(parse_rational)
        .transpose()
        .context("bad --u")?;
    let mut extra = serde_json::Map::new();
    let report = if args.anchor {
        let s = separation_bound_anchored(&region, args.d, u).map_err(explain)?;
        extra.insert(
            "anchor".into(),
            json!(s
                .anchor
                .point
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()),
        );
        extra.insert("original_K".into(), region_json(&region));
        extra.insert(
            "witness_on_original_K".into(),
            json!(s.witness_on_k.to_string()),
        );
        s.report
    } else {
        separation_bound(&region, args.d, u).map_err(explain)?
    };
    Ok(BoundOutcome { report, extra })
}

fn region_json(k: &BoxRegion) -> Value {
    json!(k
        .intervals()
        .iter()
        .map(|(lo, hi)| vec![format_rational(lo), format_rational(hi)])
        .collect::<Vec<_>>())
}

fn bound(format: Format, args: &BoundArgs) -> Result<u8> {
    let BoundOutcome { report, extra } = compute_bound(args)?;
    let mut value = serde_json::to_value(&report)?;
    if let Value::Object(map) = &mut value {
        map.extend(extra);
    }
    emit(format, &value);
    Ok(EXIT_OK)
}

fn phi_audit(format: Format) -> Result<u8> {
    let identity = phi_identity_check();
    let one = [Rational::from_integer(1.into())];
    let left = log_convexity_numerator().evaluate(&one)?;
    let right = log_convexity_witness().evaluate(&one)?;
    let min_second = log_phi_min_second_difference(0.0, 5.0, 0.01);
    let violation = (-min_second).max(0.0);
    let pass = identity && left == right && violation <= 1e-9;
    emit(
        format,
        &json!({
            "identity_holds": identity,
            "expanded_numerator": log_convexity_numerator().to_string(),
            "p_at_1_expanded": format_rational(&left),
            "p_at_1_witness": format_rational(&right),
            "min_second_difference_ln_phi": min_second,
            "max_convexity_violation": violation,
            "pass": pass,
        }),
    );
    Ok(if pass { EXIT_OK } else { EXIT_NEGATIVE })
}

fn run_attack(cli: &Cli, args: &BoundArgs, cfg: &AttackConfig) -> Result<u8> {
    let BoundOutcome { report, .. } = compute_bound(args)?;
    let result = attack(&report, cfg)?;
    if let Some(path) = &cli.out {
        fs::write(path, result.trace_csv())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let trace_path = cli.out.as_ref().map(|p| p.display().to_string());
    match cli.format {
        Format::Json => {
            let summary = json!({
                "report": serde_json::to_value(&report)?,
                "result": serde_json::to_value(&result)?,
                "trace_path": trace_path,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Format::Csv => print!("{}", result.trace_csv()),
        Format::Text => {
            println!("u: {}", format_rational(&report.u));
            println!(
                "lower_bound: {} ({:e})",
                format_rational(&report.lower_bound),
                report.lower_bound_float
            );
            println!(
                "best_gap: {} ({:e})",
                format_rational(&result.best_gap),
                result.best_gap_float
            );
            println!("best_grid_norm: {:e}", result.best_grid_norm);
            println!("margin: {:e}", result.margin_float);
            for r in &result.restarts {
                println!(
                    "restart {} (seed {}): gap {:e}, verified {}, alarm {}",
                    r.restart,
                    r.seed,
                    sonc_core::rational::to_f64(&r.best_gap),
                    r.verified_candidates,
                    r.alarm
                );
            }
            println!("alarm: {}", result.alarm);
            println!(
                "trace: {}",
                trace_path.as_deref().unwrap_or("(not written; pass --out)")
            );
        }
    }
    Ok(if result.alarm { EXIT_ALARM } else { EXIT_OK })
}
