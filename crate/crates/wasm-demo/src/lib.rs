//! Browser bindings: Gauss sums, decomposition trees and the SL₂(Z/2ⁿZ) census.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use weil::decompose::{decomposition_tree, expected_factor_count};
use weil::modgroup::census as census_rows;
use weil::weilrep::gauss_sum;

/// The browser runs single-threaded; keep the census small.
const CENSUS_MAX_N: u32 = 4;

fn to_json<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string()))
}

fn err(e: weil::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct Gauss {
    order: u32,
    coeffs: Vec<String>,
    norm_sq: String,
    approx: (f64, f64),
}

/// G(a, b, p) as JSON: power-basis coefficients in Q(ζ_order), |G|² and a float value.
#[wasm_bindgen]
pub fn gauss(a: i32, b: i32, p: u32) -> Result<String, JsError> {
    if p == 0 || p > 512 {
        return Err(JsError::new("p must be in 1..=512"));
    }
    let g = gauss_sum(a as i64, b as i64, p as u64);
    let norm = g.norm_sq().to_rational().ok_or_else(|| JsError::new("norm is not rational"))?;
    let j = g.to_json();
    let z = g.embed_complex(53);
    to_json(&Gauss { order: j.order, coeffs: j.coeffs, norm_sq: weil::rational::fmt_rational(&norm), approx: (z.re, z.im) })
}

#[derive(Serialize)]
struct Factor {
    label: String,
    dim: u64,
}

#[derive(Serialize)]
struct Tree {
    level: u64,
    genus: usize,
    expected: u64,
    factors: Vec<Factor>,
}

/// Irreducible factors of U_p^{⊗g}.
#[wasm_bindgen]
pub fn decompose(p: u32, g: u32) -> Result<String, JsError> {
    let t = decomposition_tree(p as u64, g as usize).map_err(err)?;
    let factors = t.factors.iter().map(|f| Factor { label: f.to_string(), dim: f.dim() }).collect();
    to_json(&Tree { level: t.level, genus: t.genus, expected: expected_factor_count(p as u64), factors })
}

/// Census rows of SL₂(Z/2ⁿZ) with closed-form counts.
#[wasm_bindgen]
pub fn census(n: u32) -> Result<String, JsError> {
    if n > CENSUS_MAX_N {
        return Err(JsError::new(&format!("n is limited to {} in the browser", CENSUS_MAX_N)));
    }
    to_json(&census_rows(n, 0).map_err(err)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn native_calls() {
        assert!(gauss(1, 0, 3).unwrap().contains("\"norm_sq\":\"3/1\""));
        assert!(decompose(9, 1).unwrap().contains("W_9+"));
        assert!(census(3).unwrap().starts_with('['));
    }
}
