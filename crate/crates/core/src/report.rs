//! JSON and CSV renderings of computed data.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::classify::embedded_discriminants;
use crate::cm::NeReport;
use crate::error::Result;
use crate::exact::IntMatrix;
use crate::gramgross::GramCandidate;
use crate::oracle::SupersingularSet;
use crate::orders::TypeRecord;

/// A JSON number when the value fits `i64`, otherwise a decimal string.
pub fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(big).collect()))
            .collect(),
    )
}

fn type_json(index: usize, t: &TypeRecord, disc_bound: &BigInt) -> Result<Value> {
    let g = t.gram();
    let m = t.minima();
    let c = &t.classification;
    let discs: Vec<Value> = embedded_discriminants(g, disc_bound)?
        .iter()
        .map(big)
        .collect();
    Ok(json!({
        "index": index,
        "minima": [big(&m.d1), big(&m.d2), big(&m.d3)],
        "gram": matrix_json(g),
        "x": big(&g[(0, 1)]),
        "y": big(&g[(0, 2)]),
        "z": big(&g[(1, 2)]),
        "spine": c.spine,
        "special_j": c.special_j.as_str(),
        "embedding": c.embedding.as_str(),
        "orthogonal": c.orthogonal,
        "well_rounded": c.well_rounded,
        "embedded_discriminants": discs,
    }))
}

pub fn types_json(p: u64, ell: u64, disc_bound: u64, types: &[TypeRecord]) -> Result<Value> {
    let bound = BigInt::from(disc_bound);
    let rows = types
        .iter()
        .enumerate()
        .map(|(i, t)| type_json(i, t, &bound))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "schema": 1,
        "p": p,
        "ell": ell,
        "disc_bound": disc_bound,
        "count": types.len(),
        "spine_count": types.iter().filter(|t| t.classification.spine).count(),
        "types": rows,
    }))
}

pub const TYPES_CSV_HEADER: &str = "p,type_index,D1,D2,D3,x,y,z,spine,special_j,embedding";

pub fn types_csv(p: u64, types: &[TypeRecord]) -> String {
    let mut out = String::from(TYPES_CSV_HEADER);
    out.push('\n');
    for (i, t) in types.iter().enumerate() {
        let g = t.gram();
        let m = t.minima();
        let c = &t.classification;
        out.push_str(&format!(
            "{p},{i},{},{},{},{},{},{},{},{},{}\n",
            m.d1,
            m.d2,
            m.d3,
            g[(0, 1)],
            g[(0, 2)],
            g[(1, 2)],
            c.spine,
            c.special_j,
            c.embedding
        ));
    }
    out
}

pub fn gramgross_json(p: u64, d1: u64, cands: &[GramCandidate]) -> Value {
    json!({
        "schema": 1,
        "p": p,
        "d1": d1,
        "count": cands.len(),
        "matrices": cands.iter().map(|c| matrix_json(&c.gram())).collect::<Vec<_>>(),
        "candidates": cands.iter().map(|c| json!({
            "gram": matrix_json(&c.gram()),
            "x": big(&c.x),
            "y": big(&c.y),
            "z": big(&c.z),
            "n": big(&c.n),
        })).collect::<Vec<_>>(),
    })
}

pub fn oracle_json(set: &SupersingularSet) -> Value {
    json!({
        "schema": 1,
        "p": set.p,
        "nonresidue": set.nonresidue,
        "count": set.count,
        "spine_count": set.spine_count,
        "orbit_count": set.orbit_count,
        "j_list": set.j_list.iter().map(|j| json!([j.a, j.b])).collect::<Vec<_>>(),
    })
}

pub fn ne_json(r: &NeReport) -> Value {
    json!({
        "schema": 1,
        "j_label": r.label,
        "d": r.d,
        "p_max": r.p_max,
        "n_e": r.n_e,
        "points": r.points.iter().map(|pt| json!({
            "p": pt.p,
            "minima": [big(&pt.minima.d1), big(&pt.minima.d2), big(&pt.minima.d3)],
            "gram": pt.gram.iter().map(|row| row.iter().map(big).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "matches_closed_form": pt.matches_closed_form,
        })).collect::<Vec<_>>(),
    })
}

pub const CM_CSV_HEADER: &str = "j_label,p,D1,D2,D3,matches_closed_form";

pub fn ne_csv(r: &NeReport) -> String {
    let mut out = String::from(CM_CSV_HEADER);
    out.push('\n');
    for pt in &r.points {
        let m = match pt.matches_closed_form {
            Some(b) => b.to_string(),
            None => "n/a".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{m}\n",
            r.label, pt.p, pt.minima.d1, pt.minima.d2, pt.minima.d3
        ));
    }
    out
}
