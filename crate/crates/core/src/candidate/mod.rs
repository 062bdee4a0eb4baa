//! Candidate points: minimize the midpoint objective over the robust
//! feasible set, which is a polyhedron.

use thiserror::Error;

use crate::linprog::{lp_solve_with, LinearSystem, LpConfig, LpError, LpStatus, Sense};
use crate::model::{CandidatePoint, IntervalLP, DEFAULT_ZERO_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CandidateError {
    #[error("the midpoint objective is unbounded below on the robust feasible set")]
    Unbounded,
    #[error("operation requires an equality-form problem")]
    NotEqualityForm,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// The robust feasible set as a linear system over `(x, y¹, y²) ≥ 0`:
///
/// ```text
/// Āx + B̄y¹ − B̲y² ≤ b̄,   A̲x + B̲y¹ − B̄y² ≥ b̲,   C̄x + D̄y¹ − D̲y² ≤ ā
/// ```
///
/// Any feasible `(x, y¹ − y²)` is robust feasible, and every robust
/// feasible `(x, y)` is represented with `y¹ = y⁺`, `y² = y⁻`.
#[derive(Debug, Clone)]
pub struct RobustFeasibleLP {
    pub system: LinearSystem,
    /// Midpoint objective `(c^c, d^c, −d^c)`.
    pub objective: Vec<f64>,
    pub n: usize,
    pub n_prime: usize,
}

impl RobustFeasibleLP {
    pub fn new(p: &IntervalLP) -> Self {
        let (n, np) = (p.n(), p.n_prime());
        let mut sys = LinearSystem::nonnegative(n + 2 * np);
        let (ax_lo, ax_hi, by_lo, by_hi) = (p.eq_x().lo(), p.eq_x().hi(), p.eq_y().lo(), p.eq_y().hi());
        let row = |x: nalgebra::DMatrixView<f64>, y1: nalgebra::DMatrixView<f64>, y2: nalgebra::DMatrixView<f64>| {
            let mut v: Vec<f64> = x.iter().copied().collect();
            v.extend(y1.iter());
            v.extend(y2.iter().map(|t| -t));
            v
        };
        for i in 0..p.m() {
            let b = p.eq_rhs()[i];
            sys.add_le(row(ax_hi.rows(i, 1), by_hi.rows(i, 1), by_lo.rows(i, 1)), b.hi());
            sys.add_ge(row(ax_lo.rows(i, 1), by_lo.rows(i, 1), by_hi.rows(i, 1)), b.lo());
        }
        let (cx_hi, dy_lo, dy_hi) = (p.ineq_x().hi(), p.ineq_y().lo(), p.ineq_y().hi());
        for k in 0..p.m_prime() {
            sys.add_le(row(cx_hi.rows(k, 1), dy_hi.rows(k, 1), dy_lo.rows(k, 1)), p.ineq_rhs()[k].hi());
        }
        let mut objective: Vec<f64> = p.cost_x().mid().iter().copied().collect();
        let d = p.cost_y().mid();
        objective.extend(d.iter());
        objective.extend(d.iter().map(|v| -v));
        Self { system: sys, objective, n, n_prime: np }
    }

    /// Restricts `x_i = 0` for `i ∈ zero`.
    pub fn with_zeros(mut self, zero: &[usize]) -> Self {
        for &i in zero {
            let mut row = vec![0.0; self.system.n_vars()];
            row[i] = 1.0;
            self.system.add_eq(row, 0.0);
        }
        self
    }

    /// Splits an LP point into the candidate `(x, y¹ − y²)`, snapping
    /// entries of `x` below `zero_tol` to zero.
    pub fn candidate(&self, z: &[f64], zero_tol: f64) -> CandidatePoint {
        let x = z[..self.n].iter().map(|&v| if v <= zero_tol { 0.0 } else { v }).collect();
        let y = (0..self.n_prime).map(|l| z[self.n + l] - z[self.n + self.n_prime + l]).collect();
        CandidatePoint::new(x, y).expect("snapped entries are nonnegative")
    }
}

/// `(y⁺, y⁻)`.
pub fn split_free(y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (y.iter().map(|v| v.max(0.0)).collect(), y.iter().map(|v| (-v).max(0.0)).collect())
}

fn solve(p: &IntervalLP, cfg: &LpConfig) -> Result<Option<CandidatePoint>, CandidateError> {
    let lp = RobustFeasibleLP::new(p);
    let res = lp_solve_with(&lp.objective, &lp.system, Sense::Minimize, cfg)?;
    match res.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(CandidateError::Unbounded),
        _ => Ok(res.point.map(|z| lp.candidate(&z, DEFAULT_ZERO_TOL))),
    }
}

/// `min (c^c)ᵀx` over `Āx ≤ b̄, A̲x ≥ b̲, x ≥ 0`; `None` when that set is
/// empty.
pub fn find_candidate_eq(p: &IntervalLP) -> Result<Option<CandidatePoint>, CandidateError> {
    if !p.is_equality_form() {
        return Err(CandidateError::NotEqualityForm);
    }
    solve(p, &LpConfig::default())
}

/// General-form heuristic over `(x, y¹, y²)`.
pub fn find_candidate_gen(p: &IntervalLP) -> Result<Option<CandidatePoint>, CandidateError> {
    solve(p, &LpConfig::default())
}

/// Dispatches on the problem form.
pub fn find_candidate(p: &IntervalLP) -> Result<Option<CandidatePoint>, CandidateError> {
    solve(p, &LpConfig::default())
}

/// Midpoint objective `(c^c)ᵀx + (d^c)ᵀy`.
pub fn midpoint_objective(p: &IntervalLP, pt: &CandidatePoint) -> f64 {
    let c = p.cost_x().mid();
    let d = p.cost_y().mid();
    pt.x().iter().zip(c.iter()).map(|(a, b)| a * b).sum::<f64>() + pt.y().iter().zip(d.iter()).map(|(a, b)| a * b).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Interval, IntervalMatrix, IntervalVector};
    use crate::model::samples;
    use crate::robust::check_feasibility_eq;

    #[test]
    fn transport_candidate_objective() {
        let p = samples::transport_3x3(&samples::TRANSPORT_EDGES);
        let pt = find_candidate_eq(&p).unwrap().unwrap();
        assert!(check_feasibility_eq(&p, &pt));
        assert!((midpoint_objective(&p, &pt) - 5040.0).abs() < 1e-6);
    }

    #[test]
    fn point_problem_gives_classical_optimum() {
        let p = samples::triangle_with(Interval::point(0.5), Interval::point(0.0));
        let pt = find_candidate_eq(&p).unwrap().unwrap();
        assert!((pt.x()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_set_gives_none() {
        let a = IntervalMatrix::from_point(&nalgebra::DMatrix::from_row_slice(1, 2, &[1., 1.]));
        let b = IntervalVector::new(vec![Interval::new(-2., -1.).unwrap()]);
        let p = IntervalLP::equality(a, b, IntervalVector::points(&[1., 1.])).unwrap();
        assert_eq!(find_candidate_eq(&p), Ok(None));
    }

    #[test]
    fn unbounded_is_reported() {
        let a = IntervalMatrix::from_point(&nalgebra::DMatrix::from_row_slice(1, 2, &[1., -1.]));
        let p = IntervalLP::equality(a, IntervalVector::points(&[0.]), IntervalVector::points(&[-1., 0.])).unwrap();
        assert_eq!(find_candidate_eq(&p), Err(CandidateError::Unbounded));
    }

    #[test]
    fn split_round_trip() {
        let (a, b) = split_free(&[1.5, -2.0, 0.0]);
        assert_eq!(a, vec![1.5, 0.0, 0.0]);
        assert_eq!(b, vec![0.0, 2.0, 0.0]);
    }
}
