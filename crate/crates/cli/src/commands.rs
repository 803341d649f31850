use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;
use serde_json::{json, Value};

use mkernel_core::{
    construct_lemma31, definiteness_check, kernel_exact, kernel_float, mertens as mertens_at, riemann_l2_sum, scan_identities,
    sieve_mobius, spectrum as compute_spectrum, IdentityKind, Rational, Sign,
};

use crate::output::{format_f64, Table};
use crate::{CliError, Outcome};

/// Largest Möbius table the CLI will sieve.
pub const MAX_TABLE: u64 = 200_000_000;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn params<const K: usize>(pairs: [(&str, Value); K]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn table_upto(limit: u64) -> Result<mkernel_core::MobiusTable, CliError> {
    if limit > MAX_TABLE {
        return Err(CliError {
            kind: "resource-limit",
            message: format!("a table up to {limit} exceeds the limit of {MAX_TABLE}"),
        });
    }
    Ok(sieve_mobius(limit.max(1))?)
}

pub fn mobius(limit: u64) -> Result<Outcome, CliError> {
    if limit == 0 {
        return Err(CliError::invalid("--limit must be at least 1"));
    }
    let table = table_upto(limit)?;
    let rows = (1..=limit)
        .map(|k| vec![k.to_string(), table.mu(k).to_string(), table.mertens_at(k).to_string()])
        .collect();
    Ok(Outcome {
        parameters: params([("limit", json!(limit))]),
        results: json!({
            "limit": limit,
            "mu": table.mu_values(),
            "mertens_prefix": table.mertens_values(),
        }),
        passed: true,
        table: Some(Table { header: vec!["k", "mu", "mertens"], rows }),
    })
}

pub fn mertens(at: Option<f64>, upto: Option<u64>) -> Result<Outcome, CliError> {
    match (at, upto) {
        (Some(x), None) => {
            if !(x.is_finite() && x >= 0.0) {
                return Err(CliError::invalid(format!("--at must be a non-negative real, got {x}")));
            }
            let table = table_upto(x.floor() as u64)?;
            let value = mertens_at(x, &table)?;
            Ok(Outcome {
                parameters: params([("at", json!(x))]),
                results: json!({ "x": x, "value": value }),
                passed: true,
                table: None,
            })
        }
        (None, Some(limit)) => {
            if limit == 0 {
                return Err(CliError::invalid("--upto must be at least 1"));
            }
            let table = table_upto(limit)?;
            let rows = (1..=limit)
                .map(|k| vec![k.to_string(), table.mertens_at(k).to_string()])
                .collect();
            Ok(Outcome {
                parameters: params([("upto", json!(limit))]),
                results: json!({ "upto": limit, "values": table.mertens_values() }),
                passed: true,
                table: Some(Table { header: vec!["n", "mertens"], rows }),
            })
        }
        _ => Err(CliError::invalid("give exactly one of --at and --upto")),
    }
}

fn parse_float_arg(s: &str) -> Result<f64, CliError> {
    if let Ok(v) = s.trim().parse::<f64>() {
        return Ok(v);
    }
    Ok(s.parse::<Rational>()?.to_f64())
}

pub fn kernel(x: &str, y: &str, float: bool) -> Result<Outcome, CliError> {
    let parameters = params([("x", json!(x)), ("y", json!(y)), ("float", json!(float))]);
    let results = if float {
        let (xf, yf) = (parse_float_arg(x)?, parse_float_arg(y)?);
        json!({ "x": xf, "y": yf, "value": kernel_float(xf, yf)? })
    } else {
        let (xr, yr): (Rational, Rational) = (x.parse()?, y.parse()?);
        let value = kernel_exact(&xr, &yr)?;
        json!({ "x": xr, "y": yr, "value": value, "value_f64": value.to_f64() })
    };
    Ok(Outcome { parameters, results, passed: true, table: None })
}

/// Parses an inclusive range `A..B`; `A..B` with B < A is empty.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, CliError> {
    let bad = || CliError::invalid(format!("range must look like A..B with integers, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    Ok(a..=b)
}

pub fn identity(kind: IdentityKind, range: &str, cap: u64) -> Result<Outcome, CliError> {
    let r = parse_range(range)?;
    let parameters = params([("check", json!(kind)), ("range", json!(range)), ("cap", json!(cap))]);
    if !r.is_empty() && kind == IdentityKind::Eq12 && *r.end() > cap {
        return Err(CliError::invalid(format!("eq12 range end {} exceeds --cap {cap}", r.end())));
    }
    let needed = if r.is_empty() {
        1
    } else {
        kind.table_limit_for(*r.end()).ok_or_else(|| CliError::invalid("range end too large"))?
    };
    let table = table_upto(needed)?;
    let scan = scan_identities(kind, r, &table)?;
    let rows = scan
        .reports
        .iter()
        .map(|rep| {
            vec![
                rep.parameter.to_string(),
                rep.lhs.numer().to_string(),
                rep.lhs.denom().to_string(),
                rep.rhs.numer().to_string(),
                rep.rhs.denom().to_string(),
                rep.residual.numer().to_string(),
                rep.residual.denom().to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        parameters,
        passed: scan.all_zero,
        results: to_value(&scan),
        table: Some(Table {
            header: vec!["parameter", "lhs_num", "lhs_den", "rhs_num", "rhs_den", "residual_num", "residual_den"],
            rows,
        }),
    })
}

pub fn l2(grid: u64) -> Result<Outcome, CliError> {
    let value = riemann_l2_sum(grid)?;
    Ok(Outcome {
        parameters: params([("grid", json!(grid))]),
        results: json!({ "grid": grid, "value": value, "value_f64": value.to_f64() }),
        passed: true,
        table: None,
    })
}

pub fn spectrum(grid: u64, threshold: f64) -> Result<Outcome, CliError> {
    let s = compute_spectrum(grid, threshold)?;
    let rows = (0..s.eigenvalues.len())
        .map(|i| {
            vec![
                (i + 1).to_string(),
                format_f64(s.eigenvalues[i]),
                s.estimate_at(i).map(format_f64).unwrap_or_default(),
            ]
        })
        .collect();
    let mut results = to_value(&s);
    results["trace_gap"] = json!(s.trace_gap());
    results["frobenius_gap"] = json!(s.frobenius_gap());
    results["consistent"] = json!(s.is_consistent());
    Ok(Outcome {
        parameters: params([("grid", json!(grid)), ("threshold", json!(threshold))]),
        passed: s.is_consistent(),
        results,
        table: Some(Table { header: vec!["index", "eigenvalue", "kernel_estimate"], rows }),
    })
}

pub fn witness(u: i64, extra: usize, q: Option<f64>) -> Result<Outcome, CliError> {
    let sign = Sign::from_value(u)?;
    let inst = construct_lemma31(sign, extra, q)?;
    let report = definiteness_check(&inst)?;
    let mut parameters = params([("u", json!(u)), ("extra", json!(extra))]);
    if let Some(q) = q {
        parameters.insert("q".into(), json!(q));
    }
    Ok(Outcome {
        parameters,
        passed: report.all_passed(),
        results: to_value(&report),
        table: None,
    })
}
