//! JSON problem files.
//!
//! ```json
//! { "m": 2, "n": 3, "m_prime": 0, "n_prime": 0,
//!   "A_lo": [[1,1,1],[1,-1,0]], "A_hi": [[1,1,1],[1,-1,0]],
//!   "b_lo": [1,-1], "b_hi": [1,1], "c_lo": [1,1,0.5], "c_hi": [1,1,1.5],
//!   "candidate_x": [1,0,0] }
//! ```
//!
//! Matrices may be nested rows or flat row-major arrays. Blocks `B, C, D`
//! and vectors `a, d` may be omitted when their dimensions are zero.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::interval::{IntervalMatrix, IntervalVector};

use super::{CandidatePoint, GeneralBlocks, IntervalLP, ModelError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl Default for MatrixRepr {
    fn default() -> Self {
        MatrixRepr::Flat(Vec::new())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    m: usize,
    n: usize,
    #[serde(default)]
    m_prime: usize,
    #[serde(default)]
    n_prime: usize,
    #[serde(rename = "A_lo")]
    eq_x_lo: MatrixRepr,
    #[serde(rename = "A_hi")]
    eq_x_hi: MatrixRepr,
    #[serde(rename = "B_lo", default)]
    eq_y_lo: MatrixRepr,
    #[serde(rename = "B_hi", default)]
    eq_y_hi: MatrixRepr,
    #[serde(rename = "C_lo", default)]
    ineq_x_lo: MatrixRepr,
    #[serde(rename = "C_hi", default)]
    ineq_x_hi: MatrixRepr,
    #[serde(rename = "D_lo", default)]
    ineq_y_lo: MatrixRepr,
    #[serde(rename = "D_hi", default)]
    ineq_y_hi: MatrixRepr,
    b_lo: Vec<f64>,
    b_hi: Vec<f64>,
    #[serde(default)]
    a_lo: Vec<f64>,
    #[serde(default)]
    a_hi: Vec<f64>,
    c_lo: Vec<f64>,
    c_hi: Vec<f64>,
    #[serde(default)]
    d_lo: Vec<f64>,
    #[serde(default)]
    d_hi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    candidate_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    candidate_y: Option<Vec<f64>>,
}

fn field_err(field: &str, msg: impl Into<String>) -> ModelError {
    ModelError::Field { field: field.to_string(), msg: msg.into() }
}

fn to_dense(field: &str, repr: &MatrixRepr, rows: usize, cols: usize) -> Result<DMatrix<f64>, ModelError> {
    let flat: Vec<f64> = match repr {
        MatrixRepr::Nested(r) => {
            if r.len() != rows {
                return Err(field_err(field, format!("expected {rows} rows, found {}", r.len())));
            }
            if let Some((i, row)) = r.iter().enumerate().find(|(_, row)| row.len() != cols) {
                return Err(field_err(field, format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            r.concat()
        }
        MatrixRepr::Flat(v) => {
            if v.len() != rows * cols {
                return Err(field_err(field, format!("expected {} entries ({rows}×{cols}), found {}", rows * cols, v.len())));
            }
            v.clone()
        }
    };
    Ok(DMatrix::from_row_slice(rows, cols, &flat))
}

fn to_imatrix(
    name: &str,
    lo: &MatrixRepr,
    hi: &MatrixRepr,
    rows: usize,
    cols: usize,
) -> Result<IntervalMatrix, ModelError> {
    let l = to_dense(&format!("{name}_lo"), lo, rows, cols)?;
    let h = to_dense(&format!("{name}_hi"), hi, rows, cols)?;
    for i in 0..rows {
        for j in 0..cols {
            if !(l[(i, j)] <= h[(i, j)]) || !l[(i, j)].is_finite() || !h[(i, j)].is_finite() {
                return Err(field_err(
                    name,
                    format!("entry [{i}][{j}] has invalid bounds [{}, {}]", l[(i, j)], h[(i, j)]),
                ));
            }
        }
    }
    IntervalMatrix::from_bounds(&l, &h).map_err(|e| field_err(name, e.to_string()))
}

fn to_ivector(name: &str, lo: &[f64], hi: &[f64], len: usize) -> Result<IntervalVector, ModelError> {
    for (suffix, v) in [("lo", lo), ("hi", hi)] {
        if v.len() != len {
            return Err(field_err(&format!("{name}_{suffix}"), format!("expected {len} entries, found {}", v.len())));
        }
    }
    IntervalVector::from_bounds(lo, hi).map_err(|_| {
        let i = (0..len).find(|&i| !(lo[i] <= hi[i] && lo[i].is_finite() && hi[i].is_finite())).unwrap_or(0);
        field_err(name, format!("entry [{i}] has invalid bounds [{}, {}]", lo[i], hi[i]))
    })
}

impl ProblemFile {
    fn into_model(self) -> Result<(IntervalLP, Option<CandidatePoint>), ModelError> {
        let (m, n, mp, np) = (self.m, self.n, self.m_prime, self.n_prime);
        let blocks = GeneralBlocks {
            eq_x: to_imatrix("A", &self.eq_x_lo, &self.eq_x_hi, m, n)?,
            eq_y: to_imatrix("B", &self.eq_y_lo, &self.eq_y_hi, m, np)?,
            ineq_x: to_imatrix("C", &self.ineq_x_lo, &self.ineq_x_hi, mp, n)?,
            ineq_y: to_imatrix("D", &self.ineq_y_lo, &self.ineq_y_hi, mp, np)?,
            eq_rhs: to_ivector("b", &self.b_lo, &self.b_hi, m)?,
            ineq_rhs: to_ivector("a", &self.a_lo, &self.a_hi, mp)?,
            cost_x: to_ivector("c", &self.c_lo, &self.c_hi, n)?,
            cost_y: to_ivector("d", &self.d_lo, &self.d_hi, np)?,
        };
        let lp = IntervalLP::general(blocks)?;
        let cand = match (self.candidate_x, self.candidate_y) {
            (None, None) => None,
            (x, y) => {
                let x = x.ok_or_else(|| field_err("candidate_x", "missing while candidate_y is present"))?;
                let y = y.unwrap_or_default();
                if x.len() != n {
                    return Err(field_err("candidate_x", format!("expected {n} entries, found {}", x.len())));
                }
                if y.len() != np {
                    return Err(field_err("candidate_y", format!("expected {np} entries, found {}", y.len())));
                }
                Some(CandidatePoint::new(x, y).map_err(|e| field_err("candidate_x", e.to_string()))?)
            }
        };
        Ok((lp, cand))
    }

    fn from_model(p: &IntervalLP, cand: Option<&CandidatePoint>) -> Self {
        let nested = |m: DMatrix<f64>| {
            MatrixRepr::Nested((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
        };
        let v = |d: nalgebra::DVector<f64>| d.as_slice().to_vec();
        ProblemFile {
            m: p.m(),
            n: p.n(),
            m_prime: p.m_prime(),
            n_prime: p.n_prime(),
            eq_x_lo: nested(p.eq_x().lo()),
            eq_x_hi: nested(p.eq_x().hi()),
            eq_y_lo: nested(p.eq_y().lo()),
            eq_y_hi: nested(p.eq_y().hi()),
            ineq_x_lo: nested(p.ineq_x().lo()),
            ineq_x_hi: nested(p.ineq_x().hi()),
            ineq_y_lo: nested(p.ineq_y().lo()),
            ineq_y_hi: nested(p.ineq_y().hi()),
            b_lo: v(p.eq_rhs().lo()),
            b_hi: v(p.eq_rhs().hi()),
            a_lo: v(p.ineq_rhs().lo()),
            a_hi: v(p.ineq_rhs().hi()),
            c_lo: v(p.cost_x().lo()),
            c_hi: v(p.cost_x().hi()),
            d_lo: v(p.cost_y().lo()),
            d_hi: v(p.cost_y().hi()),
            candidate_x: cand.map(|c| c.x().to_vec()),
            candidate_y: cand.filter(|c| !c.y().is_empty()).map(|c| c.y().to_vec()),
        }
    }
}

/// Parse a problem (and optional candidate) from JSON text.
pub fn parse_problem(text: &str) -> Result<(IntervalLP, Option<CandidatePoint>), ModelError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    file.into_model()
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<(IntervalLP, Option<CandidatePoint>), ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ModelError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_problem(&text)
}

/// Pretty JSON with nested matrix rows. Round-trips exactly through
/// [`parse_problem`].
pub fn problem_to_json(p: &IntervalLP, cand: Option<&CandidatePoint>) -> String {
    serde_json::to_string_pretty(&ProblemFile::from_model(p, cand)).expect("plain data serializes")
}

pub fn save_problem(path: impl AsRef<Path>, p: &IntervalLP, cand: Option<&CandidatePoint>) -> Result<(), ModelError> {
    let path = path.as_ref();
    std::fs::write(path, problem_to_json(p, cand) + "\n")
        .map_err(|e| ModelError::Io { path: path.display().to_string(), msg: e.to_string() })
}
