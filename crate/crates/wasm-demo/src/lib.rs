//! Browser demo: the triangle instance with adjustable data and the 3×3
//! transportation instance with toggleable `[0,1]` edges. Every export
//! returns a JSON string; the plain functions are usable natively.

use robust_ilp::candidate::{find_candidate_eq, midpoint_objective};
use robust_ilp::interval::Interval;
use robust_ilp::model::{samples, CandidatePoint, IntervalLP};
use robust_ilp::robust::{
    check_feasibility_eq, check_optimality_exact, check_sufficient, enumerate_robust_components, CheckOptions,
    Optimality, Verdict,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn error(msg: impl ToString) -> Value {
    json!({ "error": msg.to_string() })
}

fn opts() -> CheckOptions {
    CheckOptions { parallel: false, ..CheckOptions::default() }
}

fn triangle(c3_lo: f64, c3_hi: f64, b2_lo: f64, b2_hi: f64) -> Result<IntervalLP, Value> {
    let c3 = Interval::new(c3_lo, c3_hi).map_err(error)?;
    let b2 = Interval::new(b2_lo, b2_hi).map_err(error)?;
    Ok(samples::triangle_with(c3, b2))
}

fn optimality(o: Optimality) -> &'static str {
    match o {
        Optimality::Yes => "yes",
        Optimality::No => "no",
        Optimality::Unknown => "unknown",
    }
}

fn verdict_json(v: &Verdict) -> Value {
    let cert = v.certificate.as_ref();
    json!({
        "feasible": v.feasible,
        "optimal": optimality(v.optimal),
        "systems": v.systems_checked,
        "direction": cert.and_then(|c| c.witness.as_ref()).map(|d| d.x.clone()),
        "costs": cert.and_then(|c| c.realization.as_ref()).map(|r| r.cost_x.clone()),
    })
}

/// Exact verdict for the point `x` of the triangle instance with
/// `c3 ∈ [c3_lo, c3_hi]` and `b2 ∈ [b2_lo, b2_hi]`.
pub fn triangle_check_value(c3_lo: f64, c3_hi: f64, b2_lo: f64, b2_hi: f64, x: [f64; 3]) -> Value {
    let p = match triangle(c3_lo, c3_hi, b2_lo, b2_hi) {
        Ok(p) => p,
        Err(e) => return e,
    };
    let pt = match CandidatePoint::equality(x.to_vec()) {
        Ok(pt) => pt,
        Err(e) => return error(e),
    };
    match check_optimality_exact(&p, &pt, &opts()) {
        Ok(v) => verdict_json(&v),
        Err(e) => error(e),
    }
}

/// Robust optimal pieces of the triangle instance, each as its list of
/// vertices.
pub fn triangle_components_value(c3_lo: f64, c3_hi: f64, b2_lo: f64, b2_hi: f64) -> Value {
    let p = match triangle(c3_lo, c3_hi, b2_lo, b2_hi) {
        Ok(p) => p,
        Err(e) => return e,
    };
    match enumerate_robust_components(&p, 3) {
        Ok(comps) => {
            let pieces: Vec<Value> = comps
                .iter()
                .map(|c| {
                    let points = if c.is_point(1e-9) { vec![c.witness.clone()] } else { piece_vertices(&c.zero_set, b2_lo, b2_hi) };
                    json!({ "zero_set": c.zero_set, "points": points })
                })
                .collect();
            json!({ "components": pieces })
        }
        Err(e) => error(e),
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Vertices, in angular order, of the piece `{x ≥ 0 : Σx = 1,
/// b2_lo ≤ x1 − x2 ≤ b2_hi, x_i = 0 for i ∈ zero}`.
fn piece_vertices(zero: &[usize], b2_lo: f64, b2_hi: f64) -> Vec<Vec<f64>> {
    let mut planes: Vec<([f64; 3], f64)> = (0..3).map(|i| (std::array::from_fn(|k| (k == i) as u8 as f64), 0.0)).collect();
    planes.push(([1.0, -1.0, 0.0], b2_lo));
    planes.push(([1.0, -1.0, 0.0], b2_hi));
    let inside = |x: &[f64; 3]| {
        let d = x[0] - x[1];
        x.iter().all(|&v| v >= -1e-9) && zero.iter().all(|&i| x[i].abs() <= 1e-9) && d >= b2_lo - 1e-9 && d <= b2_hi + 1e-9
    };
    let mut points: Vec<[f64; 3]> = Vec::new();
    for a in 0..planes.len() {
        for b in a + 1..planes.len() {
            let m = [[1.0; 3], planes[a].0, planes[b].0];
            let r = [1.0, planes[a].1, planes[b].1];
            let det = det3(m);
            if det.abs() < 1e-12 {
                continue;
            }
            // Cramer's rule
            let x: [f64; 3] = std::array::from_fn(|col| {
                let mut mc = m;
                (0..3).for_each(|row| mc[row][col] = r[row]);
                det3(mc) / det
            });
            if inside(&x) && !points.iter().any(|q| q.iter().zip(&x).all(|(u, v)| (u - v).abs() < 1e-9)) {
                points.push(x);
            }
        }
    }
    let n = points.len().max(1) as f64;
    let centre: [f64; 3] = std::array::from_fn(|k| points.iter().map(|p| p[k]).sum::<f64>() / n);
    // plane coordinates (x2 − x1, x3) suffice for ordering
    let angle = |p: &[f64; 3]| (p[2] - centre[2]).atan2(p[1] - p[0] - (centre[1] - centre[0]));
    points.sort_by(|p, q| angle(p).total_cmp(&angle(q)));
    points.into_iter().map(|p| p.to_vec()).collect()
}

/// Candidate and verdicts for the 3×3 transportation sample; bit `3i + j`
/// of `edge_mask` makes edge `(i, j)` uncertain.
pub fn transport_value(edge_mask: u32) -> Value {
    let edges: Vec<(usize, usize)> = (0..9).filter(|k| edge_mask >> k & 1 == 1).map(|k| (k / 3, k % 3)).collect();
    let p = samples::transport_3x3(&edges);
    let cand = match find_candidate_eq(&p) {
        Ok(Some(c)) => c,
        Ok(None) => return json!({ "candidate": null, "reason": "the robust feasible set is empty" }),
        Err(e) => return error(e),
    };
    let suff = check_sufficient(&p, &cand, &opts()).map(|v| optimality(v.optimal));
    let exact = check_optimality_exact(&p, &cand, &opts());
    json!({
        "candidate": cand.x(),
        "objective": midpoint_objective(&p, &cand),
        "feasible": check_feasibility_eq(&p, &cand),
        "sufficient": suff.unwrap_or("unknown"),
        "exact": exact.as_ref().map(verdict_json).unwrap_or_else(error),
    })
}

#[wasm_bindgen]
pub fn triangle_check(c3_lo: f64, c3_hi: f64, b2_lo: f64, b2_hi: f64, x1: f64, x2: f64, x3: f64) -> String {
    triangle_check_value(c3_lo, c3_hi, b2_lo, b2_hi, [x1, x2, x3]).to_string()
}

#[wasm_bindgen]
pub fn triangle_components(c3_lo: f64, c3_hi: f64, b2_lo: f64, b2_hi: f64) -> String {
    triangle_components_value(c3_lo, c3_hi, b2_lo, b2_hi).to_string()
}

#[wasm_bindgen]
pub fn transport(edge_mask: u32) -> String {
    transport_value(edge_mask).to_string()
}
