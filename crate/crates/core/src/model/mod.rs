//! Interval linear programs in general form
//!
//! ```text
//! min cᵀx + dᵀy   s.t.  A x + B y = b,  C x + D y ≤ a,  x ≥ 0
//! ```
//!
//! with every coefficient ranging over an interval. The equality form
//! `min cᵀx s.t. Ax = b, x ≥ 0` is the special case without `y` and without
//! inequality rows.

mod diet;
mod io;
pub mod samples;
mod transport;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalMatrix, IntervalVector};

pub use diet::{load_diet, DietData, DietFood, DietNutrient, DietOptions};
pub use io::{load_problem, parse_problem, problem_to_json, save_problem};
pub use transport::build_transportation;

/// Default threshold below which a candidate entry counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch in {block}: expected {expected}, got {found}")]
    Dimension { block: String, expected: String, found: String },
    #[error("candidate entry x[{index}] = {value} is negative")]
    NegativeCandidate { index: usize, value: f64 },
    #[error("edge ({0}, {1}) is out of range")]
    EdgeOutOfRange(usize, usize),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("cannot access {path}: {msg}")]
    Io { path: String, msg: String },
}

fn dim_err(block: &str, expected: impl ToString, found: impl ToString) -> ModelError {
    ModelError::Dimension { block: block.to_string(), expected: expected.to_string(), found: found.to_string() }
}

/// The interval data of a general-form LP. Empty blocks are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalLP {
    eq_x: IntervalMatrix,
    eq_y: IntervalMatrix,
    ineq_x: IntervalMatrix,
    ineq_y: IntervalMatrix,
    eq_rhs: IntervalVector,
    ineq_rhs: IntervalVector,
    cost_x: IntervalVector,
    cost_y: IntervalVector,
}

/// Blocks for [`IntervalLP::general`]: `A, B, C, D, b, a, c, d`.
#[derive(Debug, Clone)]
pub struct GeneralBlocks {
    pub eq_x: IntervalMatrix,
    pub eq_y: IntervalMatrix,
    pub ineq_x: IntervalMatrix,
    pub ineq_y: IntervalMatrix,
    pub eq_rhs: IntervalVector,
    pub ineq_rhs: IntervalVector,
    pub cost_x: IntervalVector,
    pub cost_y: IntervalVector,
}

impl IntervalLP {
    /// `min cᵀx s.t. Ax = b, x ≥ 0`.
    pub fn equality(a: IntervalMatrix, b: IntervalVector, c: IntervalVector) -> Result<Self, ModelError> {
        let (m, n) = a.shape();
        Self::general(GeneralBlocks {
            eq_x: a,
            eq_y: IntervalMatrix::zeros(m, 0),
            ineq_x: IntervalMatrix::zeros(0, n),
            ineq_y: IntervalMatrix::zeros(0, 0),
            eq_rhs: b,
            ineq_rhs: IntervalVector::default(),
            cost_x: c,
            cost_y: IntervalVector::default(),
        })
    }

    pub fn general(blocks: GeneralBlocks) -> Result<Self, ModelError> {
        let GeneralBlocks { eq_x, eq_y, ineq_x, ineq_y, eq_rhs, ineq_rhs, cost_x, cost_y } = blocks;
        let (m, n) = eq_x.shape();
        let (mp, n2) = ineq_x.shape();
        let np = cost_y.len();
        let shape = |r: usize, c: usize| format!("{r}×{c}");
        if n2 != n {
            return Err(dim_err("C", shape(mp, n), shape(mp, n2)));
        }
        if eq_y.shape() != (m, np) {
            return Err(dim_err("B", shape(m, np), shape(eq_y.nrows(), eq_y.ncols())));
        }
        if ineq_y.shape() != (mp, np) {
            return Err(dim_err("D", shape(mp, np), shape(ineq_y.nrows(), ineq_y.ncols())));
        }
        if eq_rhs.len() != m {
            return Err(dim_err("b", m, eq_rhs.len()));
        }
        if ineq_rhs.len() != mp {
            return Err(dim_err("a", mp, ineq_rhs.len()));
        }
        if cost_x.len() != n {
            return Err(dim_err("c", n, cost_x.len()));
        }
        Ok(Self { eq_x, eq_y, ineq_x, ineq_y, eq_rhs, ineq_rhs, cost_x, cost_y })
    }

    /// Number of equations.
    pub fn m(&self) -> usize {
        self.eq_x.nrows()
    }

    /// Number of inequalities.
    pub fn m_prime(&self) -> usize {
        self.ineq_x.nrows()
    }

    /// Number of sign-restricted variables.
    pub fn n(&self) -> usize {
        self.eq_x.ncols()
    }

    /// Number of free variables.
    pub fn n_prime(&self) -> usize {
        self.cost_y.len()
    }

    pub fn is_equality_form(&self) -> bool {
        self.n_prime() == 0 && self.m_prime() == 0
    }

    pub fn eq_x(&self) -> &IntervalMatrix {
        &self.eq_x
    }

    pub fn eq_y(&self) -> &IntervalMatrix {
        &self.eq_y
    }

    pub fn ineq_x(&self) -> &IntervalMatrix {
        &self.ineq_x
    }

    pub fn ineq_y(&self) -> &IntervalMatrix {
        &self.ineq_y
    }

    pub fn eq_rhs(&self) -> &IntervalVector {
        &self.eq_rhs
    }

    pub fn ineq_rhs(&self) -> &IntervalVector {
        &self.ineq_rhs
    }

    pub fn cost_x(&self) -> &IntervalVector {
        &self.cost_x
    }

    pub fn cost_y(&self) -> &IntervalVector {
        &self.cost_y
    }

    /// Copy with every interval replaced by its midpoint.
    pub fn midpoint(&self) -> IntervalLP {
        let pm = |m: &IntervalMatrix| IntervalMatrix::from_point(&m.mid());
        let pv = |v: &IntervalVector| IntervalVector::points(v.mid().as_slice());
        IntervalLP {
            eq_x: pm(&self.eq_x),
            eq_y: pm(&self.eq_y),
            ineq_x: pm(&self.ineq_x),
            ineq_y: pm(&self.ineq_y),
            eq_rhs: pv(&self.eq_rhs),
            ineq_rhs: pv(&self.ineq_rhs),
            cost_x: pv(&self.cost_x),
            cost_y: pv(&self.cost_y),
        }
    }

    /// Copy with the given entry of `A` replaced.
    pub fn with_eq_x_entry(&self, i: usize, j: usize, v: Interval) -> IntervalLP {
        let mut out = self.clone();
        out.eq_x[(i, j)] = v;
        out
    }

    pub fn blocks(&self) -> GeneralBlocks {
        GeneralBlocks {
            eq_x: self.eq_x.clone(),
            eq_y: self.eq_y.clone(),
            ineq_x: self.ineq_x.clone(),
            ineq_y: self.ineq_y.clone(),
            eq_rhs: self.eq_rhs.clone(),
            ineq_rhs: self.ineq_rhs.clone(),
            cost_x: self.cost_x.clone(),
            cost_y: self.cost_y.clone(),
        }
    }
}

/// A point `(x, y)` under test; `x` is sign-restricted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePoint {
    x: Vec<f64>,
    #[serde(default)]
    y: Vec<f64>,
}

impl CandidatePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, ModelError> {
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(ModelError::NegativeCandidate { index, value });
        }
        Ok(Self { x, y })
    }

    pub fn equality(x: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(x, Vec::new())
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn check_dims(&self, p: &IntervalLP) -> Result<(), ModelError> {
        if self.x.len() != p.n() {
            return Err(dim_err("candidate x", p.n(), self.x.len()));
        }
        if self.y.len() != p.n_prime() {
            return Err(dim_err("candidate y", p.n_prime(), self.y.len()));
        }
        Ok(())
    }
}

/// Zero set `I`, its complement `J`, and the worst-case active inequality
/// rows `K` of a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveSets {
    pub zero: Vec<usize>,
    pub positive: Vec<usize>,
    pub ineq_active: Vec<usize>,
}

impl ActiveSets {
    /// Active sets given `I` directly (no inequality rows).
    pub fn from_zero_set(n: usize, zero: &[usize]) -> Self {
        let mut is_zero = vec![false; n];
        zero.iter().for_each(|&i| is_zero[i] = true);
        Self {
            zero: (0..n).filter(|&i| is_zero[i]).collect(),
            positive: (0..n).filter(|&i| !is_zero[i]).collect(),
            ineq_active: Vec::new(),
        }
    }
}

/// `I = {i : |x_i| ≤ tol}` and
/// `K = {k : C̲_k x + D^c_k y − D^Δ_k |y| ≥ a̲_k}`, the rows active for every
/// realization once the right-hand side responds optimally. The `≥` test is
/// given `tol·(1 + |a̲_k|)` slack, which can only enlarge `K`.
pub fn active_sets(p: &IntervalLP, pt: &CandidatePoint, zero_tol: f64) -> ActiveSets {
    let n = p.n();
    let zero: Vec<usize> = (0..n).filter(|&i| pt.x()[i].abs() <= zero_tol).collect();
    let mut sets = ActiveSets::from_zero_set(n, &zero);
    let y = pt.y();
    for k in 0..p.m_prime() {
        let cx: f64 = p.ineq_x.row(k).iter().zip(pt.x()).map(|(c, x)| c.lo() * x).sum();
        let dy: f64 = p.ineq_y.row(k).iter().zip(y).map(|(d, v)| d.mid() * v - d.rad() * v.abs()).sum();
        let lo = p.ineq_rhs[k].lo();
        if cx + dy >= lo - zero_tol * (1.0 + lo.abs()) {
            sets.ineq_active.push(k);
        }
    }
    sets
}
