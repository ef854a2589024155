//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON object with `"ok": true` and the payload fields, or
//! `"ok": false` with an `"error"` message.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use pdwa_core::encoding::Base;
use pdwa_core::engine::{
    compile_traced, decide, format_assignment, size_report, solve, CompileOptions, EngineKind,
};
use pdwa_core::formula::{parse, Formula};
use pdwa_core::qelim::eliminate_all;

/// Largest grid radius the page may request.
pub const MAX_RADIUS: u32 = 40;

#[derive(Serialize)]
struct Built {
    states: usize,
    tracks: Vec<String>,
    witness: Option<String>,
    bounds: Vec<String>,
    dot: String,
    automaton: Value,
}

#[derive(Serialize)]
struct Decided {
    sentence: bool,
    result: Option<bool>,
    qe: String,
}

#[derive(Serialize)]
struct Grid {
    /// Column variable, then row variable (if any).
    vars: Vec<String>,
    radius: i64,
    states: usize,
    /// `rows[j][i]` holds at column value `i - radius` and row value
    /// `radius - j`, so the first row is the top of the picture.
    rows: Vec<Vec<bool>>,
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    let value = match result.and_then(|v| serde_json::to_value(v).map_err(|e| e.to_string())) {
        Ok(Value::Object(mut fields)) => {
            fields.insert("ok".into(), Value::Bool(true));
            Value::Object(fields)
        }
        Ok(other) => json!({ "ok": true, "value": other }),
        Err(error) => json!({ "ok": false, "error": error }),
    };
    value.to_string()
}

fn setup(formula: &str, base: u32) -> Result<(Formula, CompileOptions), String> {
    let phi = parse(formula).map_err(|e| e.to_string())?;
    let base = Base::new(base).map_err(|e| e.to_string())?;
    Ok((phi, CompileOptions::with_base(base)))
}

fn build_impl(formula: &str, base: u32) -> Result<Built, String> {
    let (phi, opts) = setup(formula, base)?;
    let compiled = compile_traced(&phi, &opts).map_err(|e| e.to_string())?;
    let ledger = size_report(&phi, &opts).map_err(|e| e.to_string())?;
    let witness = solve(&phi, &opts)
        .map_err(|e| e.to_string())?
        .map(|w| format_assignment(&w));
    Ok(Built {
        states: compiled.dwa.num_states(),
        tracks: compiled.tracks.iter().map(|v| v.name.clone()).collect(),
        witness,
        bounds: ledger.bounds.iter().map(|b| b.to_string()).collect(),
        dot: compiled.dwa.to_dot(),
        automaton: serde_json::to_value(compiled.dwa.to_json()).map_err(|e| e.to_string())?,
    })
}

fn decide_impl(formula: &str, base: u32, engine: &str) -> Result<Decided, String> {
    let (phi, opts) = setup(formula, base)?;
    let engine = match engine {
        "automata" => EngineKind::Automata,
        "qe_then_automata" => EngineKind::QeThenAutomata,
        other => return Err(format!("unknown engine {other:?}")),
    };
    let opts = opts.with_engine(engine);
    let qe = eliminate_all(&phi.rename_apart()).to_string();
    let sentence = phi.free_vars().is_empty();
    let result = if sentence {
        Some(decide(&phi, &opts).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(Decided {
        sentence,
        result,
        qe,
    })
}

fn grid_impl(formula: &str, base: u32, radius: u32) -> Result<Grid, String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius is limited to {MAX_RADIUS}"));
    }
    let (phi, opts) = setup(formula, base)?;
    let compiled = compile_traced(&phi, &opts).map_err(|e| e.to_string())?;
    let vars: Vec<String> = compiled.tracks.iter().map(|v| v.name.clone()).collect();
    if vars.len() > 2 {
        return Err(format!(
            "the grid shows at most two free variables, found {}",
            vars.join(", ")
        ));
    }
    let r = i64::from(radius);
    let row_values: Vec<i64> = if vars.len() == 2 {
        (-r..=r).rev().collect()
    } else {
        vec![0]
    };
    let mut rows = Vec::with_capacity(row_values.len());
    for &y in &row_values {
        let mut row = Vec::with_capacity(2 * radius as usize + 1);
        for x in -r..=r {
            let tuple: Vec<BigInt> = [x, y][..vars.len()].iter().map(|&v| v.into()).collect();
            row.push(compiled.dwa.accepts_tuple(&tuple).map_err(|e| e.to_string())?);
        }
        rows.push(row);
    }
    Ok(Grid {
        vars,
        radius: r,
        states: compiled.dwa.num_states(),
        rows,
    })
}

/// Minimal automaton for `formula`: state count, tracks, a witness, size
/// bounds, DOT and JSON.
#[wasm_bindgen]
pub fn build(formula: &str, base: u32) -> String {
    respond(build_impl(formula, base))
}

/// Quantifier-free equivalent, plus the truth value when `formula` is a
/// sentence. `engine` is `automata` or `qe_then_automata`.
#[wasm_bindgen(js_name = decideFormula)]
pub fn decide_formula(formula: &str, base: u32, engine: &str) -> String {
    respond(decide_impl(formula, base, engine))
}

/// Membership over `[-radius, radius]^k` for a formula with `k ≤ 2` free
/// variables.
#[wasm_bindgen(js_name = solutionGrid)]
pub fn solution_grid(formula: &str, base: u32, radius: u32) -> String {
    respond(grid_impl(formula, base, radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn build_reports_state_count() {
        let v = call(build("x - y > 32", 2));
        assert_eq!(v["ok"], true);
        assert_eq!(v["states"], 13);
        assert!(v["dot"].as_str().unwrap().starts_with("digraph"));
        assert_eq!(v["tracks"], json!(["x", "y"]));
    }

    #[test]
    fn errors_are_reported_not_thrown() {
        let v = call(build("x >", 2));
        assert_eq!(v["ok"], false);
        assert!(v["error"].is_string());
        assert_eq!(call(build("x > 0", 1))["ok"], false);
        assert_eq!(call(decide_formula("x > 0", 2, "magic"))["ok"], false);
    }

    #[test]
    fn decide_and_eliminate() {
        let v = call(decide_formula("A x. E y. x = 2*y | x = 2*y + 1", 3, "automata"));
        assert_eq!(v["result"], true);
        let v = call(decide_formula("E x. 2*x = y", 2, "qe_then_automata"));
        assert_eq!(v["sentence"], false);
        assert_eq!(v["result"], Value::Null);
        assert_eq!(v["qe"], "2 divides y");
    }

    #[test]
    fn grid_matches_formula() {
        let v = call(solution_grid("x < y & 2 divides x", 2, 3));
        assert_eq!(v["vars"], json!(["x", "y"]));
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 7);
        for (j, row) in rows.iter().enumerate() {
            let y = 3 - j as i64;
            for (i, cell) in row.as_array().unwrap().iter().enumerate() {
                let x = i as i64 - 3;
                assert_eq!(cell.as_bool().unwrap(), x < y && x % 2 == 0, "({x}, {y})");
            }
        }
        let one = call(solution_grid("3 divides z", 2, 2));
        assert_eq!(one["rows"].as_array().unwrap().len(), 1);
        assert_eq!(call(solution_grid("x + y < z", 2, 2))["ok"], false);
        assert_eq!(call(solution_grid("x > 0", 2, 1000))["ok"], false);
    }
}
