//! Robust feasibility and robust optimality of a given point.
//!
//! A point `(x*, y*)` is robust optimal when for every realization of
//! `A, B, C, D, c, d` some right-hand sides `a, b` from their intervals make
//! it optimal. Feasibility and optimality are checked separately.

mod components;
mod exact;
mod feasibility;
mod reduced;
mod sufficient;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enclosure::Enclosure;
use crate::interval::SignVector;
use crate::linprog::{LpConfig, LpError};
use crate::model::{ActiveSets, ModelError, DEFAULT_ZERO_TOL};
use crate::timing::serde_secs;

pub use components::{enumerate_robust_components, enumerate_robust_components_with, RobustComponent};
pub use exact::{check_optimality_exact, criterion_holds, sign_system};
pub use feasibility::{check_feasibility, check_feasibility_eq, check_feasibility_gen, feasibility_report, FeasibilityReport};
pub use reduced::Reduced;
pub use sufficient::{
    check_sufficient, sufficient_degenerate, sufficient_degenerate_with, sufficient_nondegenerate,
    sufficient_nondegenerate_with, SufficientResult,
};

/// Default budget of sign systems for the exact check.
pub const DEFAULT_BUDGET: u64 = 1 << 20;
/// Default relative tolerance of feasibility tests.
pub const DEFAULT_FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RobustError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{systems} sign systems exceed the budget of {budget}; use a sufficient condition instead")]
    BudgetExceeded { systems: String, budget: u64 },
    #[error("{n} variables exceed the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("operation requires an equality-form problem")]
    NotEqualityForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Optimality {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Exact,
    SufficientNondegenerate,
    SufficientDegenerate,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    FeasibilityViolation,
    OptimalityCounterexample,
    DualEnclosure,
}

/// A concrete choice of every uncertain coefficient, matrices as rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Realization {
    pub eq_x: Vec<Vec<f64>>,
    pub eq_y: Vec<Vec<f64>>,
    pub ineq_x: Vec<Vec<f64>>,
    pub ineq_y: Vec<Vec<f64>>,
    pub cost_x: Vec<f64>,
    pub cost_y: Vec<f64>,
}

/// Improving direction `(x, y)` of the point at some realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_vector: Option<SignVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<Realization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_box: Option<Enclosure>,
    /// Active sets the certificate refers to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<ActiveSets>,
    /// Violated rows for feasibility certificates (equations first, then
    /// inequalities offset by `m`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub feasible: bool,
    pub optimal: Optimality,
    pub certificate: Option<Certificate>,
    pub systems_checked: u64,
    #[serde(with = "serde_secs")]
    pub elapsed: Duration,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Entries of `x*` at most this large in magnitude count as zero.
    pub zero_tol: f64,
    pub feas_tol: f64,
    pub budget: u64,
    /// Spread the sign systems over the rayon pool.
    pub parallel: bool,
    pub lp: LpConfig,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            zero_tol: DEFAULT_ZERO_TOL,
            feas_tol: DEFAULT_FEAS_TOL,
            budget: DEFAULT_BUDGET,
            parallel: true,
            lp: LpConfig::default(),
        }
    }
}

pub(crate) fn rows_of(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl Certificate {
    /// Re-checks the certificate against the problem and point.
    pub fn verify(&self, p: &crate::model::IntervalLP, pt: &crate::model::CandidatePoint, tol: f64) -> bool {
        match self.kind {
            CertificateKind::FeasibilityViolation => feasibility::verify_violation(self, p, pt, tol),
            CertificateKind::OptimalityCounterexample => exact::verify_counterexample(self, p, pt, tol),
            CertificateKind::DualEnclosure => sufficient::verify_dual_box(self, p),
        }
    }
}
