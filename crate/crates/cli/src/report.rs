//! JSON documents. Keys keep insertion order and every float is rounded to
//! 12 significant digits, so reports are stable enough to diff byte-for-byte.

use hermix_core::eigensolve::VarietyPoint;
use hermix_core::mixfit::{EdaEntry, FitReport, SolutionCandidate};
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// A finite float rounded to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // normalize -0
    json!(if rounded == 0.0 { 0.0 } else { rounded })
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

fn parameters(c: &SolutionCandidate) -> Value {
    Value::Object(c.parameters.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<Map<_, _>>())
}

pub fn candidate(c: &SolutionCandidate) -> Value {
    json!({
        "weights": nums(&c.weights),
        "parameters": parameters(c),
        "residual": num(c.residual),
        "simplex_feasible": c.simplex_feasible,
        "ks": opt_num(c.ks),
    })
}

fn diagnostics(report: &FitReport) -> Value {
    let d = &report.diagnostics;
    json!({
        "solver_path": d.solver_path.to_string(),
        "quotient_dimension": d.quotient_dimension,
        "moment_order": d.moment_order,
        "seed": d.seed,
    })
}

/// The fit document, or [`CliError::NoFeasibleCandidate`] carrying no report.
pub fn fit(report: &FitReport) -> Result<Value, CliError> {
    let best = report.best_feasible().ok_or(CliError::NoFeasibleCandidate)?;
    Ok(json!({
        "weights": nums(&best.weights),
        "parameters": parameters(best),
        "residual": num(best.residual),
        "ks": opt_num(best.ks),
        "candidates": report.candidates.iter().map(candidate).collect::<Vec<_>>(),
        "diagnostics": diagnostics(report),
    }))
}

/// Error document; infeasible fits keep their candidates for inspection.
pub fn error(err: &CliError, report: Option<&FitReport>) -> Value {
    let mut doc = Map::new();
    doc.insert("error".into(), Value::String(err.to_string()));
    doc.insert("kind".into(), Value::String(err.kind().into()));
    if let Some(r) = report {
        doc.insert("candidates".into(), Value::Array(r.candidates.iter().map(candidate).collect()));
        doc.insert("diagnostics".into(), diagnostics(r));
    }
    Value::Object(doc)
}

pub fn eda(entries: &[EdaEntry], pool_size: usize, subset_size: usize, moment_order: usize, seed: u64) -> Value {
    let ranking: Vec<Value> = entries
        .iter()
        .map(|e| {
            let families: Vec<String> = e.components.iter().map(|c| c.to_string()).collect();
            let (best, err) = match &e.outcome {
                Ok(r) => (r.best(), None),
                Err(err) => (None, Some(err.to_string())),
            };
            json!({
                "subset": e.subset,
                "families": families,
                "ks": opt_num(e.best_ks()),
                "weights": best.map_or(Value::Null, |c| nums(&c.weights)),
                "parameters": best.map_or(Value::Null, parameters),
                "residual": best.map_or(Value::Null, |c| num(c.residual)),
                "simplex_feasible": best.map(|c| c.simplex_feasible),
                "error": err,
            })
        })
        .collect();
    json!({
        "ranking": ranking,
        "diagnostics": {
            "pool_size": pool_size,
            "subset_size": subset_size,
            "moment_order": moment_order,
            "seed": seed,
        },
    })
}

fn point(vars: &[String], p: &VarietyPoint) -> Value {
    let coords: Map<String, Value> = vars
        .iter()
        .zip(&p.coordinates)
        .map(|(v, z)| (v.clone(), json!({ "re": num(z.re), "im": num(z.im) })))
        .collect();
    json!({
        "coordinates": coords,
        "multiplicity": p.multiplicity,
        "residual": num(p.residual),
    })
}

fn real_point(vars: &[String], p: &VarietyPoint) -> Value {
    let coords: Map<String, Value> = vars.iter().zip(&p.coordinates).map(|(v, z)| (v.clone(), num(z.re))).collect();
    json!({
        "coordinates": coords,
        "multiplicity": p.multiplicity,
        "residual": num(p.residual),
    })
}

pub fn roots(vars: &[String], quotient_dimension: usize, all: &[VarietyPoint], real: &[VarietyPoint]) -> Value {
    json!({
        "variables": vars,
        "quotient_dimension": quotient_dimension,
        "solutions": all.iter().map(|p| point(vars, p)).collect::<Vec<_>>(),
        "real_solutions": real.iter().map(|p| real_point(vars, p)).collect::<Vec<_>>(),
    })
}

pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    s.push('\n');
    s
}
