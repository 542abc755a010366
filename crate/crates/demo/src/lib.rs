//! Browser bindings. Every export takes plain strings and numbers and returns a
//! JSON string; failures come back as `{"error": {...}}`.

use num_rational::Rational64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use padic_core::series::{
    classify, exp_extended_stage1, padic_exp, padic_log, pth_root_binomial, term_valuation,
    SeriesKind,
};
use padic_core::valuation::{format_rational, parse_rational};
use padic_core::{Element, Error, Tower, Valuation};

fn error_json(e: &Error) -> String {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string()
}

fn finish(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => error_json(&e),
    }
}

/// `[numerator, denominator]`, for plotting.
fn pair(r: Rational64) -> Value {
    json!([r.numer(), r.denom()])
}

fn small_prime(p: u32) -> bool {
    p < 1000 && padic_core::tower::is_prime(p.into())
}

fn verdict(kind: SeriesKind, p: u32, v: Rational64) -> &'static str {
    if classify(kind, p, Valuation::Finite(v)).converges() {
        "CONVERGES"
    } else {
        "DIVERGES"
    }
}

/// Term valuations `k = 1..=n` of a series at an argument of valuation `v`.
#[wasm_bindgen]
pub fn term_curve(kind: &str, p: u32, v: &str, n: u32) -> String {
    finish((|| {
        let kind: SeriesKind = kind.parse()?;
        if !small_prime(p) {
            return Err(Error::InvalidTower(format!("{p} is not a prime below 1000")));
        }
        let v = parse_rational(v)?;
        let terms: Vec<Value> = (1..=n.clamp(1, 400) as u64)
            .map(|k| {
                let t = term_valuation(kind, p, k, Valuation::Finite(v))
                    .finite()
                    .expect("finite argument");
                json!({"k": k, "valuation": format_rational(t), "pair": pair(t)})
            })
            .collect();
        Ok(json!({
            "kind": kind.name(),
            "p": p,
            "v": format_rational(v),
            "threshold": format_rational(kind.threshold(p)),
            "verdict": verdict(kind, p, v),
            "terms": terms,
        }))
    })())
}

/// Verdicts of all three series for `v = m/e`, `-2e <= m <= 4e`.
#[wasm_bindgen]
pub fn boundary_table(p: u32, e: u32) -> String {
    finish((|| {
        if !small_prime(p) || e == 0 || e > 60 {
            return Err(Error::InvalidTower(format!("p = {p}, e = {e}")));
        }
        let e = e as i64;
        let rows: Vec<Value> = (-2 * e..=4 * e)
            .map(|m| {
                let v = Rational64::new(m, e);
                json!({
                    "v": format_rational(v),
                    "pair": pair(v),
                    "exp": verdict(SeriesKind::Exp, p, v),
                    "log": verdict(SeriesKind::Log, p, v),
                    "binom": verdict(SeriesKind::BinomialPthRoot, p, v),
                })
            })
            .collect();
        let thresholds: Value = SeriesKind::ALL
            .iter()
            .map(|k| (k.name().to_string(), json!(format_rational(k.threshold(p)))))
            .collect::<serde_json::Map<_, _>>()
            .into();
        Ok(json!({"p": p, "e": e, "thresholds": thresholds, "rows": rows}))
    })())
}

/// Evaluates `exp`, `log`, `root` or `stage1` at an element given as an
/// expression such as `pi^2 + 3` or as a JSON literal.
#[wasm_bindgen]
pub fn evaluate(kind: &str, p: u32, e: u32, u: i32, prec: u32, element: &str) -> String {
    finish((|| {
        if prec == 0 || prec > 200 || e > 40 {
            return Err(Error::InvalidTower("precision must be in 1..=200 and e at most 40".into()));
        }
        let tw = Tower::new(p, e, u as i64, prec)?;
        let x = Element::parse(element, tw)?;
        let y = match kind {
            "exp" => padic_exp(&x)?,
            "log" => padic_log(&x)?,
            "root" => pth_root_binomial(&x)?,
            "stage1" => exp_extended_stage1(&x)?,
            other => return Err(Error::Parse(format!("unknown series {other:?}"))),
        };
        Ok(json!({
            "input": x.to_literal(),
            "input_valuation": x.valuation().to_string(),
            "value": y.to_literal(),
            "display": y.to_string(),
            "valuation": y.valuation().to_string(),
            "absolute_precision": format_rational(y.abs_prec()),
        }))
    })())
}
