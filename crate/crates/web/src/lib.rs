//! WebAssembly bindings for the browser page in `www/`.
//!
//! Each export returns a JSON string: the result, or `{code, message}` on
//! failure. The `*_json` functions hold the logic and are tested natively.

use std::str::FromStr;

use defexp::symcoeff::CoeffTable;
use defexp::validate::{locate, residual_profile};
use defexp::zeros::ZeroFinder;
use defexp::{Error, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest coefficient index offered on the page.
pub const MAX_N: usize = 12;
/// Largest zero index offered on the page.
pub const MAX_K: usize = 40;

fn failure(code: &str, message: impl ToString) -> Value {
    json!({"code": code, "message": message.to_string()})
}

fn from_error(e: Error) -> Value {
    failure(e.code(), e)
}

fn parse_q(q: &str) -> Result<Rational, Value> {
    Rational::from_str(q).map_err(from_error)
}

/// `C_n` in the basis `raw`, `a012` or `eisenstein`, with a plain-text form.
pub fn coefficient_json(n: usize, basis: &str) -> Value {
    if n == 0 || n > MAX_N {
        return failure("out_of_range", format!("n must be in 1..={MAX_N}"));
    }
    let mut t = CoeffTable::new();
    let p = match basis {
        "raw" => t.c_n(n),
        "a012" => t.c_n_a012(n),
        "eisenstein" => t.c_n_eisenstein(n),
        other => return failure("usage", format!("unknown basis {other:?}")),
    };
    match p {
        Ok(p) => json!({"n": n, "basis": basis, "text": p.to_string(), "terms": p.len(), "poly": p}),
        Err(e) => from_error(e),
    }
}

/// The zeros `x_1, ..., x_kmax` with their asymptotic guesses.
pub fn zeros_json(q: &str, kmax: usize) -> Value {
    if kmax == 0 || kmax > MAX_K {
        return failure("out_of_range", format!("kmax must be in 1..={MAX_K}"));
    }
    let qr = match parse_q(q) {
        Ok(r) => r,
        Err(v) => return v,
    };
    let mut t = CoeffTable::new();
    let finder = match ZeroFinder::new(&qr, q, 4, &mut t) {
        Ok(f) => f,
        Err(e) => return from_error(e),
    };
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let z = match locate(&finder, k, &qr, q, &mut t) {
            Ok(z) => z,
            Err(e) => return from_error(e),
        };
        let guess = finder.guess(k, 64);
        rows.push(json!({
            "k": k,
            "x": z.x.to_sci(z.x.warranted_digits().clamp(1, 30)),
            "guess": guess.to_sci(15),
            "log10_abs_x": z.x.log2_abs() * std::f64::consts::LOG10_2,
            "method": z.method,
        }));
    }
    json!({"q": q, "zeros": rows})
}

/// Scaled residuals `r_n(k)` for `k = kmin..=kmax` and their limit.
pub fn residuals_json(q: &str, n: usize, kmin: usize, kmax: usize) -> Value {
    if n > 4 || kmin == 0 || kmax < kmin || kmax > MAX_K {
        return failure("out_of_range", format!("need n <= 4 and 1 <= kmin <= kmax <= {MAX_K}"));
    }
    let qr = match parse_q(q) {
        Ok(r) => r,
        Err(v) => return v,
    };
    let ks: Vec<usize> = (kmin..=kmax).collect();
    match residual_profile(&qr, q, &ks, n, &mut CoeffTable::new(), None) {
        Ok(p) => serde_json::to_value(&p).unwrap_or_else(|e| failure("internal", e)),
        Err(e) => from_error(e),
    }
}

#[wasm_bindgen]
pub fn coefficient(n: usize, basis: &str) -> String {
    coefficient_json(n, basis).to_string()
}

#[wasm_bindgen]
pub fn zeros(q: &str, kmax: usize) -> String {
    zeros_json(q, kmax).to_string()
}

#[wasm_bindgen]
pub fn residuals(q: &str, n: usize, kmin: usize, kmax: usize) -> String {
    residuals_json(q, n, kmin, kmax).to_string()
}
