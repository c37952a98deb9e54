//! Browser bindings: each export returns a JSON string or throws a message.

use grosslat::exact::is_prime;
use grosslat::gramgross::gram_gross;
use grosslat::oracle::supersingular_j_set;
use grosslat::orders::{default_ell, enumerate_types};
use grosslat::report;
use wasm_bindgen::prelude::*;

/// Upper limit on `p` for the in-browser type enumeration.
pub const MAX_TYPES_P: u64 = 2000;
/// Upper limit on `p` for the `F_(p^2)` sweep.
pub const MAX_ORACLE_P: u64 = 600;

fn prime_at_most(p: u64, cap: u64) -> Result<(), String> {
    if !is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    if p > cap {
        return Err(format!("p = {p} is above the demo limit {cap}"));
    }
    Ok(())
}

pub fn types(p: u64, disc_bound: u64) -> Result<String, String> {
    prime_at_most(p, MAX_TYPES_P)?;
    let ell = default_ell(p);
    let types = enumerate_types(p, ell).map_err(|e| e.to_string())?;
    report::types_json(p, ell, disc_bound, &types)
        .map(|v| v.to_string())
        .map_err(|e| e.to_string())
}

pub fn gramgross(p: u64, d1: u64) -> Result<String, String> {
    let cands = gram_gross(p, d1).map_err(|e| e.to_string())?;
    Ok(report::gramgross_json(p, d1, &cands).to_string())
}

pub fn oracle(p: u64) -> Result<String, String> {
    prime_at_most(p, MAX_ORACLE_P)?;
    let set = supersingular_j_set(p).map_err(|e| e.to_string())?;
    Ok(report::oracle_json(&set).to_string())
}

#[wasm_bindgen(js_name = typesJson)]
pub fn types_json(p: u32, disc_bound: u32) -> Result<String, JsError> {
    types(p.into(), disc_bound.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gramgrossJson)]
pub fn gramgross_json(p: u32, d1: u32) -> Result<String, JsError> {
    gramgross(p.into(), d1.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = oracleJson)]
pub fn oracle_json(p: u32) -> Result<String, JsError> {
    oracle(p.into()).map_err(|e| JsError::new(&e))
}
