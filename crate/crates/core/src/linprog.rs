//! Dense two-phase tableau simplex.
//!
//! Systems have the shape `E x = e, L x ≤ l` with a per-variable
//! sign restriction. Every infeasible verdict carries a Farkas certificate
//! that is re-checked against the original data before it is returned, and
//! every optimal point is checked for dual feasibility and a zero duality
//! gap on the original data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch in {what}: expected {expected}, got {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("simplex exceeded the pivot limit of {0}")]
    IterationLimit(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpConfig {
    /// Primal feasibility tolerance (relative to row scale).
    pub feas_tol: f64,
    /// Dual feasibility / duality gap tolerance.
    pub opt_tol: f64,
    /// Smallest admissible pivot element.
    pub pivot_tol: f64,
    /// Dantzig pivots per phase before switching to Bland's rule.
    pub dantzig_pivots: usize,
    pub max_pivots: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self { feas_tol: 1e-8, opt_tol: 1e-7, pivot_tol: 1e-10, dantzig_pivots: 200, max_pivots: 50_000 }
    }
}

/// `eq_lhs·x = eq_rhs`, `le_lhs·x ≤ le_rhs`, `x_j ≥ 0` where `nonneg[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem {
    n_vars: usize,
    eq_lhs: Vec<Vec<f64>>,
    eq_rhs: Vec<f64>,
    le_lhs: Vec<Vec<f64>>,
    le_rhs: Vec<f64>,
    nonneg: Vec<bool>,
}

impl LinearSystem {
    /// A system over `n_vars` free variables with no rows.
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            eq_lhs: Vec::new(),
            eq_rhs: Vec::new(),
            le_lhs: Vec::new(),
            le_rhs: Vec::new(),
            nonneg: vec![false; n_vars],
        }
    }

    /// A system over `n_vars` sign-restricted variables.
    pub fn nonnegative(n_vars: usize) -> Self {
        let mut s = Self::new(n_vars);
        s.nonneg.fill(true);
        s
    }

    pub fn set_nonneg(&mut self, j: usize, nonneg: bool) -> &mut Self {
        self.nonneg[j] = nonneg;
        self
    }

    pub fn add_eq(&mut self, row: impl Into<Vec<f64>>, rhs: f64) -> &mut Self {
        self.eq_lhs.push(row.into());
        self.eq_rhs.push(rhs);
        self
    }

    pub fn add_le(&mut self, row: impl Into<Vec<f64>>, rhs: f64) -> &mut Self {
        self.le_lhs.push(row.into());
        self.le_rhs.push(rhs);
        self
    }

    /// `row·x ≥ rhs`, stored as `−row·x ≤ −rhs`.
    pub fn add_ge(&mut self, row: impl Into<Vec<f64>>, rhs: f64) -> &mut Self {
        let mut r: Vec<f64> = row.into();
        r.iter_mut().for_each(|v| *v = -*v);
        self.add_le(r, -rhs)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn eq_rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.eq_lhs.iter().map(Vec::as_slice).zip(self.eq_rhs.iter().copied())
    }

    pub fn le_rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.le_lhs.iter().map(Vec::as_slice).zip(self.le_rhs.iter().copied())
    }

    pub fn n_eq(&self) -> usize {
        self.eq_lhs.len()
    }

    pub fn n_le(&self) -> usize {
        self.le_lhs.len()
    }

    pub fn nonneg_mask(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.nonneg.len() != self.n_vars {
            return Err(LpError::DimensionMismatch {
                what: "nonneg mask",
                expected: self.n_vars,
                found: self.nonneg.len(),
            });
        }
        for row in self.eq_lhs.iter().chain(&self.le_lhs) {
            if row.len() != self.n_vars {
                return Err(LpError::DimensionMismatch { what: "row", expected: self.n_vars, found: row.len() });
            }
        }
        Ok(())
    }

    /// Largest constraint violation of `x`, each row scaled by
    /// `1 + |rhs| + Σ|a_j x_j|`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let scaled = |row: &[f64], rhs: f64| {
            let (dot, abs) = row.iter().zip(x).fold((0.0, 0.0), |(d, a), (r, v)| (d + r * v, a + (r * v).abs()));
            (dot - rhs, 1.0 + rhs.abs() + abs)
        };
        let mut worst: f64 = 0.0;
        for (row, rhs) in self.eq_rows() {
            let (r, s) = scaled(row, rhs);
            worst = worst.max(r.abs() / s);
        }
        for (row, rhs) in self.le_rows() {
            let (r, s) = scaled(row, rhs);
            worst = worst.max(r / s);
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn {
                worst = worst.max(-x[j]);
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
}

/// Multipliers `(ν, μ)` with `μ ≥ 0` such that `νᵀE + μᵀL` vanishes on free
/// variables, is nonnegative on sign-restricted ones, and `νᵀe + μᵀl = −1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub eq: Vec<f64>,
    pub le: Vec<f64>,
}

impl FarkasCertificate {
    /// Checks the certificate against `sys`; returns the largest scaled
    /// violation of its defining conditions.
    pub fn violation(&self, sys: &LinearSystem) -> f64 {
        let n = sys.n_vars();
        let mut comb = vec![0.0; n];
        let mut scale = vec![0.0; n];
        let mut gap = 0.0;
        let mut gap_scale = 0.0;
        for ((row, rhs), &w) in sys.eq_rows().zip(&self.eq) {
            for j in 0..n {
                comb[j] += w * row[j];
                scale[j] += (w * row[j]).abs();
            }
            gap += w * rhs;
            gap_scale += (w * rhs).abs();
        }
        let mut worst: f64 = 0.0;
        for ((row, rhs), &w) in sys.le_rows().zip(&self.le) {
            worst = worst.max(-w);
            for j in 0..n {
                comb[j] += w * row[j];
                scale[j] += (w * row[j]).abs();
            }
            gap += w * rhs;
            gap_scale += (w * rhs).abs();
        }
        for j in 0..n {
            let v = if sys.nonneg_mask()[j] { -comb[j] } else { comb[j].abs() };
            worst = worst.max(v / (1.0 + scale[j]));
        }
        worst.max((gap + 1.0).abs() / (1.0 + gap_scale))
    }

    pub fn verify(&self, sys: &LinearSystem, tol: f64) -> bool {
        self.eq.len() == sys.n_eq() && self.le.len() == sys.n_le() && self.violation(sys) <= tol
    }
}

/// Dual multipliers of an optimal solution: `π_eq` free, `π_le ≤ 0` for a
/// minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Duals {
    pub eq: Vec<f64>,
    pub le: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub point: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub farkas: Option<FarkasCertificate>,
    pub duals: Option<Duals>,
    pub pivots: usize,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, LpStatus::Feasible | LpStatus::Optimal | LpStatus::Unbounded)
    }

    fn infeasible(farkas: FarkasCertificate, pivots: usize) -> Self {
        Self { status: LpStatus::Infeasible, point: None, objective: None, farkas: Some(farkas), duals: None, pivots }
    }
}

/// Phase-I feasibility test.
pub fn lp_feasible(sys: &LinearSystem) -> Result<LpResult, LpError> {
    lp_feasible_with(sys, &LpConfig::default())
}

pub fn lp_feasible_with(sys: &LinearSystem, cfg: &LpConfig) -> Result<LpResult, LpError> {
    sys.validate()?;
    let mut tab = Tableau::build(sys);
    match tab.phase_one(sys, cfg)? {
        PhaseOne::Infeasible(cert, pivots) => Ok(LpResult::infeasible(cert, pivots)),
        PhaseOne::Feasible => {
            let x = tab.primal(sys);
            check_primal(sys, &x, cfg)?;
            Ok(LpResult {
                status: LpStatus::Feasible,
                point: Some(x),
                objective: None,
                farkas: None,
                duals: None,
                pivots: tab.pivots,
            })
        }
    }
}

/// Optimizes `objᵀx` over `sys`.
pub fn lp_solve(obj: &[f64], sys: &LinearSystem, sense: Sense) -> Result<LpResult, LpError> {
    lp_solve_with(obj, sys, sense, &LpConfig::default())
}

pub fn lp_solve_with(obj: &[f64], sys: &LinearSystem, sense: Sense, cfg: &LpConfig) -> Result<LpResult, LpError> {
    sys.validate()?;
    if obj.len() != sys.n_vars() {
        return Err(LpError::DimensionMismatch { what: "objective", expected: sys.n_vars(), found: obj.len() });
    }
    let sign = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let cost: Vec<f64> = obj.iter().map(|c| sign * c).collect();

    let mut tab = Tableau::build(sys);
    if let PhaseOne::Infeasible(cert, pivots) = tab.phase_one(sys, cfg)? {
        return Ok(LpResult::infeasible(cert, pivots));
    }
    tab.drive_out_artificials(cfg);
    tab.load_cost(sys, &cost);
    let unbounded = !tab.iterate(tab.n_struct, cfg)?;
    let x = tab.primal(sys);
    check_primal(sys, &x, cfg)?;
    if unbounded {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            point: None,
            objective: None,
            farkas: None,
            duals: None,
            pivots: tab.pivots,
        });
    }
    let (eq, le) = tab.duals();
    check_dual(sys, &cost, &x, &eq, &le, cfg)?;
    let objective = obj.iter().zip(&x).map(|(c, v)| c * v).sum();
    let duals = Duals { eq: eq.iter().map(|v| sign * v).collect(), le: le.iter().map(|v| sign * v).collect() };
    Ok(LpResult {
        status: LpStatus::Optimal,
        point: Some(x),
        objective: Some(objective),
        farkas: None,
        duals: Some(duals),
        pivots: tab.pivots,
    })
}

fn check_primal(sys: &LinearSystem, x: &[f64], cfg: &LpConfig) -> Result<(), LpError> {
    let v = sys.max_violation(x);
    if v > cfg.feas_tol {
        return Err(LpError::Numerical(format!("returned point violates constraints by {v:.3e}")));
    }
    Ok(())
}

/// Dual feasibility and zero gap for `min costᵀx` on the original data.
fn check_dual(sys: &LinearSystem, cost: &[f64], x: &[f64], eq: &[f64], le: &[f64], cfg: &LpConfig) -> Result<(), LpError> {
    let n = sys.n_vars();
    let mut reduced = cost.to_vec();
    let mut scale: Vec<f64> = cost.iter().map(|c| c.abs()).collect();
    let mut dual_obj = 0.0;
    for ((row, rhs), &p) in sys.eq_rows().zip(eq).chain(sys.le_rows().zip(le)) {
        for j in 0..n {
            reduced[j] -= p * row[j];
            scale[j] += (p * row[j]).abs();
        }
        dual_obj += p * rhs;
    }
    if let Some(p) = le.iter().find(|&&p| p > cfg.opt_tol) {
        return Err(LpError::Numerical(format!("inequality multiplier {p:.3e} has the wrong sign")));
    }
    for j in 0..n {
        let v = if sys.nonneg_mask()[j] { -reduced[j] } else { reduced[j].abs() };
        if v > cfg.opt_tol * (1.0 + scale[j]) {
            return Err(LpError::Numerical(format!("dual infeasibility {v:.3e} on variable {j}")));
        }
    }
    let primal: f64 = cost.iter().zip(x).map(|(c, v)| c * v).sum();
    if (primal - dual_obj).abs() > cfg.opt_tol * (1.0 + primal.abs().max(dual_obj.abs())) {
        return Err(LpError::Numerical(format!("duality gap: primal {primal}, dual {dual_obj}")));
    }
    Ok(())
}

enum PhaseOne {
    Feasible,
    Infeasible(FarkasCertificate, usize),
}

/// Tableau over standard-form columns: split structural variables, then
/// slacks, then one artificial per row. The last row holds reduced costs,
/// the last column the right-hand side.
struct Tableau {
    rows: usize,
    width: usize,
    n_struct: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    /// Standard column of `x_j⁺`, and of `x_j⁻` for free variables.
    pos_col: Vec<usize>,
    neg_col: Vec<Option<usize>>,
    /// +1/−1: sign applied to each original row to make its rhs nonnegative.
    row_sign: Vec<f64>,
    n_eq: usize,
    pivots: usize,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Self {
        let n = sys.n_vars();
        let mut pos_col = Vec::with_capacity(n);
        let mut neg_col = Vec::with_capacity(n);
        let mut next = 0;
        for &nn in sys.nonneg_mask() {
            pos_col.push(next);
            next += 1;
            if nn {
                neg_col.push(None);
            } else {
                neg_col.push(Some(next));
                next += 1;
            }
        }
        let first_slack = next;
        let rows = sys.n_eq() + sys.n_le();
        let n_struct = first_slack + sys.n_le();
        let width = n_struct + rows + 1;
        let mut data = vec![0.0; (rows + 1) * width];
        let mut row_sign = Vec::with_capacity(rows);
        let all_rows = sys.eq_rows().map(|r| (r, None)).chain(sys.le_rows().enumerate().map(|(k, r)| (r, Some(k))));
        for (i, ((coeffs, rhs), slack)) in all_rows.enumerate() {
            let s = if rhs < 0.0 { -1.0 } else { 1.0 };
            row_sign.push(s);
            let base = i * width;
            for j in 0..n {
                data[base + pos_col[j]] = s * coeffs[j];
                if let Some(c) = neg_col[j] {
                    data[base + c] = -s * coeffs[j];
                }
            }
            if let Some(k) = slack {
                data[base + first_slack + k] = s;
            }
            data[base + n_struct + i] = 1.0;
            data[base + width - 1] = s * rhs;
        }
        Self {
            rows,
            width,
            n_struct,
            data,
            basis: (n_struct..n_struct + rows).collect(),
            pos_col,
            neg_col,
            row_sign,
            n_eq: sys.n_eq(),
            pivots: 0,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.width - 1]
    }

    fn obj_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let p = self.at(r, e);
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + e] = 1.0;
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, e);
            if f == 0.0 {
                continue;
            }
            for j in 0..w {
                let v = self.data[r * w + j];
                if v != 0.0 {
                    self.data[i * w + j] -= f * v;
                }
            }
            self.data[i * w + e] = 0.0;
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Sets the reduced-cost row for column costs `cost` (length `width−1`).
    fn set_costs(&mut self, cost: &[f64]) {
        let w = self.width;
        let obj = self.obj_row();
        for j in 0..w {
            let mut d = if j < w - 1 { cost[j] } else { 0.0 };
            for i in 0..self.rows {
                let cb = cost[self.basis[i]];
                if cb != 0.0 {
                    d -= cb * self.at(i, j);
                }
            }
            self.data[obj * w + j] = d;
        }
    }

    /// Runs simplex iterations with entering columns restricted to
    /// `0..enter_limit`. Returns `false` on an unbounded ray.
    fn iterate(&mut self, enter_limit: usize, cfg: &LpConfig) -> Result<bool, LpError> {
        let obj = self.obj_row();
        let start = self.pivots;
        loop {
            let done = self.pivots - start;
            if done > cfg.max_pivots {
                return Err(LpError::IterationLimit(cfg.max_pivots));
            }
            let bland = done >= cfg.dantzig_pivots;
            let mut enter = None;
            let mut best = -cfg.feas_tol;
            for j in 0..enter_limit {
                let d = self.at(obj, j);
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(e) = enter else { return Ok(true) };

            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if a <= cfg.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio, a)),
                    Some((li, lr, la)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[li]
                            } else {
                                a > la
                            }
                        } else {
                            ratio < lr
                        };
                        if better {
                            Some((i, ratio, a))
                        } else {
                            Some((li, lr, la))
                        }
                    }
                };
            }
            let Some((r, _, _)) = leave else { return Ok(false) };
            self.pivot(r, e);
        }
    }

    fn phase_one(&mut self, sys: &LinearSystem, cfg: &LpConfig) -> Result<PhaseOne, LpError> {
        let mut cost = vec![0.0; self.width - 1];
        cost[self.n_struct..].fill(1.0);
        self.set_costs(&cost);
        self.iterate(self.n_struct, cfg)?;
        let infeas = -self.at(self.obj_row(), self.width - 1);
        let scale = 1.0 + (0..self.rows).map(|i| self.row_rhs_abs(sys, i)).fold(0.0, f64::max);
        if infeas <= cfg.feas_tol * scale {
            return Ok(PhaseOne::Feasible);
        }
        // y_i = 1 − d(artificial_i); Farkas multipliers are −σ_i y_i / w.
        let obj = self.obj_row();
        let y: Vec<f64> = (0..self.rows).map(|i| 1.0 - self.at(obj, self.n_struct + i)).collect();
        let w: f64 = (0..self.rows).map(|i| y[i] * self.row_sign[i] * self.row_rhs(sys, i)).sum();
        if w <= 0.0 {
            return Err(LpError::Numerical("phase one ended with a non-separating dual".into()));
        }
        let mult: Vec<f64> = (0..self.rows).map(|i| -self.row_sign[i] * y[i] / w).collect();
        let n_eq = sys.n_eq();
        let cert = FarkasCertificate { eq: mult[..n_eq].to_vec(), le: mult[n_eq..].iter().map(|v| v.max(0.0)).collect() };
        let viol = cert.violation(sys);
        if viol > 1e2 * cfg.feas_tol {
            return Err(LpError::Numerical(format!("Farkas certificate fails verification ({viol:.3e})")));
        }
        Ok(PhaseOne::Infeasible(cert, self.pivots))
    }

    fn row_rhs(&self, sys: &LinearSystem, i: usize) -> f64 {
        if i < sys.n_eq() {
            sys.eq_rhs[i]
        } else {
            sys.le_rhs[i - sys.n_eq()]
        }
    }

    fn row_rhs_abs(&self, sys: &LinearSystem, i: usize) -> f64 {
        self.row_rhs(sys, i).abs()
    }

    /// Pivots basic artificials (at level zero after phase one) out of the
    /// basis where a structural column allows it. Rows where none does are
    /// redundant and keep their artificial, which can never re-enter.
    fn drive_out_artificials(&mut self, cfg: &LpConfig) {
        for i in 0..self.rows {
            if self.basis[i] < self.n_struct {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n_struct {
                let a = self.at(i, j).abs();
                if a > cfg.pivot_tol && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            if let Some((j, _)) = best {
                self.pivot(i, j);
            }
        }
    }

    fn load_cost(&mut self, sys: &LinearSystem, cost: &[f64]) {
        let mut full = vec![0.0; self.width - 1];
        for j in 0..sys.n_vars() {
            full[self.pos_col[j]] = cost[j];
            if let Some(c) = self.neg_col[j] {
                full[c] = -cost[j];
            }
        }
        self.set_costs(&full);
    }

    fn primal(&self, sys: &LinearSystem) -> Vec<f64> {
        let mut std = vec![0.0; self.width - 1];
        for i in 0..self.rows {
            std[self.basis[i]] = self.rhs(i).max(0.0);
        }
        (0..sys.n_vars())
            .map(|j| std[self.pos_col[j]] - self.neg_col[j].map_or(0.0, |c| std[c]))
            .collect()
    }

    /// Duals of the original rows from the artificial columns' reduced costs.
    fn duals(&self) -> (Vec<f64>, Vec<f64>) {
        let obj = self.obj_row();
        let y: Vec<f64> = (0..self.rows).map(|i| -self.at(obj, self.n_struct + i) * self.row_sign[i]).collect();
        (y[..self.n_eq].to_vec(), y[self.n_eq..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradictory_bounds_are_infeasible_with_certificate() {
        let mut s = LinearSystem::nonnegative(1);
        s.add_le(vec![1.0], -1.0);
        let r = lp_feasible(&s).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        assert!(r.farkas.unwrap().verify(&s, 1e-9));
    }

    #[test]
    fn simplex_segment_is_feasible() {
        let mut s = LinearSystem::nonnegative(2);
        s.add_eq(vec![1.0, 1.0], 1.0);
        let r = lp_feasible(&s).unwrap();
        assert_eq!(r.status, LpStatus::Feasible);
        let x = r.point.unwrap();
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12 && x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn cone_system_has_direction_minus_one_minus_one_two() {
        // x1 + x2 + 0.5 x3 = −1, x1 + x2 + x3 = 0, x1 − x2 = 0, x3 ≥ 0
        let mut s = LinearSystem::new(3);
        s.set_nonneg(2, true);
        s.add_eq(vec![1.0, 1.0, 0.5], -1.0).add_eq(vec![1.0, 1.0, 1.0], 0.0).add_eq(vec![1.0, -1.0, 0.0], 0.0);
        let r = lp_feasible(&s).unwrap();
        assert_eq!(r.status, LpStatus::Feasible);
        let x = r.point.unwrap();
        let t = x[2] / 2.0;
        for (v, d) in x.iter().zip([-1.0, -1.0, 2.0]) {
            assert!((v - t * d).abs() < 1e-9);
        }
        assert!(t > 0.0);
    }

    #[test]
    fn minimize_single_bound() {
        let mut s = LinearSystem::new(1);
        s.add_ge(vec![1.0], 3.0);
        let r = lp_solve(&[1.0], &s, Sense::Minimize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective.unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_objective_returns_feasible_point() {
        let mut s = LinearSystem::nonnegative(3);
        s.add_eq(vec![1.0, 2.0, 3.0], 6.0).add_le(vec![1.0, 0.0, 0.0], 1.0);
        let r = lp_solve(&[0.0; 3], &s, Sense::Minimize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.objective, Some(0.0));
        assert!(s.max_violation(&r.point.unwrap()) < 1e-9);
    }

    #[test]
    fn unbounded_and_maximize() {
        let mut s = LinearSystem::new(2);
        s.add_le(vec![1.0, -1.0], 1.0);
        let r = lp_solve(&[-1.0, -1.0], &s, Sense::Minimize).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);

        let mut s = LinearSystem::nonnegative(2);
        s.add_le(vec![1.0, 1.0], 4.0).add_le(vec![1.0, 0.0], 2.0).add_le(vec![0.0, 1.0], 3.0);
        let r = lp_solve(&[1.0, 2.0], &s, Sense::Maximize).unwrap();
        assert!((r.objective.unwrap() - 7.0).abs() < 1e-9);
        let d = r.duals.unwrap();
        assert!(d.le.iter().all(|&p| p >= -1e-12));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut s = LinearSystem::new(2);
        s.add_eq(vec![1.0], 1.0);
        assert!(matches!(lp_feasible(&s), Err(LpError::DimensionMismatch { .. })));
        let s = LinearSystem::new(2);
        assert!(matches!(lp_solve(&[1.0], &s, Sense::Minimize), Err(LpError::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance.
        let mut s = LinearSystem::nonnegative(4);
        s.add_le(vec![0.25, -60.0, -0.04, 9.0], 0.0)
            .add_le(vec![0.5, -90.0, -0.02, 3.0], 0.0)
            .add_le(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        let r = lp_solve(&[-0.75, 150.0, -0.02, 6.0], &s, Sense::Minimize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective.unwrap() + 0.05).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut s = LinearSystem::nonnegative(2);
        s.add_eq(vec![1.0, 1.0], 2.0).add_eq(vec![2.0, 2.0], 4.0);
        let r = lp_solve(&[1.0, 3.0], &s, Sense::Minimize).unwrap();
        assert!((r.objective.unwrap() - 2.0).abs() < 1e-9);
    }
}
