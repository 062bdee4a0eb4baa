use serde::{Deserialize, Serialize};

use crate::interval::IntervalMatrix;
use crate::model::{CandidatePoint, IntervalLP};

use super::{rows_of, Certificate, CertificateKind, Realization};

/// Row-wise slack of the robust feasibility conditions. Positive excess
/// means the row is violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `|A^c x + B^c y − b^c| + A^Δ x + B^Δ|y| − b^Δ` per equation.
    pub eq_excess: Vec<f64>,
    /// `C̄x + D^c y + D^Δ|y| − ā` per inequality.
    pub ineq_excess: Vec<f64>,
    /// Rows whose scaled excess is above tolerance; inequalities are
    /// numbered after the equations.
    pub violated: Vec<usize>,
}

struct RowEval {
    center: f64,
    spread: f64,
    scale: f64,
}

/// `(M^c z + N^c w, M^Δ|z| + N^Δ|w|, Σ|M^c z| + Σ|N^c w|)` for row `i`, with
/// `upper` replacing the center of the x-part by the upper bound.
fn eval_row(mx: &IntervalMatrix, my: &IntervalMatrix, i: usize, x: &[f64], y: &[f64]) -> RowEval {
    let mut e = RowEval { center: 0.0, spread: 0.0, scale: 0.0 };
    for (a, v) in mx.row(i).iter().zip(x).chain(my.row(i).iter().zip(y)) {
        e.center += a.mid() * v;
        e.spread += a.rad() * v.abs();
        e.scale += (a.mid() * v).abs();
    }
    e
}

pub fn feasibility_report(p: &IntervalLP, pt: &CandidatePoint, tol: f64) -> FeasibilityReport {
    let (x, y) = (pt.x(), pt.y());
    let mut violated = Vec::new();
    let eq_excess: Vec<f64> = (0..p.m())
        .map(|i| {
            let e = eval_row(p.eq_x(), p.eq_y(), i, x, y);
            let b = p.eq_rhs()[i];
            let excess = (e.center - b.mid()).abs() + e.spread - b.rad();
            if excess > tol * (1.0 + b.mid().abs() + e.scale) {
                violated.push(i);
            }
            excess
        })
        .collect();
    let ineq_excess: Vec<f64> = (0..p.m_prime())
        .map(|k| {
            let e = eval_row(p.ineq_x(), p.ineq_y(), k, x, y);
            let a = p.ineq_rhs()[k];
            let excess = e.center + e.spread - a.hi();
            if excess > tol * (1.0 + a.hi().abs() + e.scale) {
                violated.push(p.m() + k);
            }
            excess
        })
        .collect();
    FeasibilityReport { feasible: violated.is_empty(), eq_excess, ineq_excess, violated }
}

/// Tolerance test `|A^c x − b^c| + A^Δ|x| ≤ b^Δ`.
pub fn check_feasibility_eq(p: &IntervalLP, pt: &CandidatePoint) -> bool {
    feasibility_report(p, pt, super::DEFAULT_FEAS_TOL).feasible
}

/// Equations as in the equality form plus `C̄x + D^c y + D^Δ|y| ≤ ā`.
pub fn check_feasibility_gen(p: &IntervalLP, pt: &CandidatePoint) -> bool {
    feasibility_report(p, pt, super::DEFAULT_FEAS_TOL).feasible
}

pub fn check_feasibility(p: &IntervalLP, pt: &CandidatePoint, tol: f64) -> bool {
    feasibility_report(p, pt, tol).feasible
}

/// Realization pushing every violated row out of its right-hand side
/// interval; other rows at the midpoint.
pub(super) fn violation_certificate(p: &IntervalLP, pt: &CandidatePoint, report: &FeasibilityReport) -> Certificate {
    let (x, y) = (pt.x(), pt.y());
    let mut r = Realization {
        eq_x: rows_of(&p.eq_x().mid()),
        eq_y: rows_of(&p.eq_y().mid()),
        ineq_x: rows_of(&p.ineq_x().mid()),
        ineq_y: rows_of(&p.ineq_y().mid()),
        cost_x: p.cost_x().mid().as_slice().to_vec(),
        cost_y: p.cost_y().mid().as_slice().to_vec(),
    };
    let push = |mx: &IntervalMatrix, my: &IntervalMatrix, i: usize, up: bool, rx: &mut Vec<f64>, ry: &mut Vec<f64>| {
        let dir = if up { 1.0 } else { -1.0 };
        for (j, a) in mx.row(i).iter().enumerate() {
            rx[j] = a.bound(up);
        }
        for (j, a) in my.row(i).iter().enumerate() {
            let s = if y[j] >= 0.0 { 1.0 } else { -1.0 };
            ry[j] = a.mid() + dir * s * a.rad();
        }
    };
    for &row in &report.violated {
        if row < p.m() {
            let e = eval_row(p.eq_x(), p.eq_y(), row, x, y);
            let up = e.center >= p.eq_rhs()[row].mid();
            push(p.eq_x(), p.eq_y(), row, up, &mut r.eq_x[row], &mut r.eq_y[row]);
        } else {
            let k = row - p.m();
            push(p.ineq_x(), p.ineq_y(), k, true, &mut r.ineq_x[k], &mut r.ineq_y[k]);
        }
    }
    Certificate {
        kind: CertificateKind::FeasibilityViolation,
        sign_vector: None,
        witness: None,
        realization: Some(r),
        dual_box: None,
        active: None,
        rows: report.violated.clone(),
    }
}

pub(super) fn realization_within(r: &Realization, p: &IntervalLP, tol: f64) -> bool {
    let mat_ok = |m: &IntervalMatrix, rows: &[Vec<f64>]| {
        rows.len() == m.nrows()
            && rows.iter().enumerate().all(|(i, row)| {
                row.len() == m.ncols()
                    && row.iter().zip(m.row(i)).all(|(v, a)| *v >= a.lo() - tol * (1.0 + a.mag()) && *v <= a.hi() + tol * (1.0 + a.mag()))
            })
    };
    let vec_ok = |v: &[f64], iv: &crate::interval::IntervalVector| {
        v.len() == iv.len()
            && v.iter().zip(iv.iter()).all(|(x, a)| *x >= a.lo() - tol * (1.0 + a.mag()) && *x <= a.hi() + tol * (1.0 + a.mag()))
    };
    mat_ok(p.eq_x(), &r.eq_x)
        && mat_ok(p.eq_y(), &r.eq_y)
        && mat_ok(p.ineq_x(), &r.ineq_x)
        && mat_ok(p.ineq_y(), &r.ineq_y)
        && vec_ok(&r.cost_x, p.cost_x())
        && vec_ok(&r.cost_y, p.cost_y())
}

pub(super) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

pub(super) fn verify_violation(cert: &Certificate, p: &IntervalLP, pt: &CandidatePoint, tol: f64) -> bool {
    let Some(r) = &cert.realization else { return false };
    if cert.rows.is_empty() || !realization_within(r, p, tol) {
        return false;
    }
    let (x, y) = (pt.x(), pt.y());
    cert.rows.iter().all(|&row| {
        if row < p.m() {
            let v = dot(&r.eq_x[row], x) + dot(&r.eq_y[row], y);
            !p.eq_rhs()[row].contains(v)
        } else if row - p.m() < p.m_prime() {
            let k = row - p.m();
            dot(&r.ineq_x[k], x) + dot(&r.ineq_y[k], y) > p.ineq_rhs()[k].hi()
        } else {
            false
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{Interval, IntervalVector};
    use crate::model::{samples, GeneralBlocks};

    #[test]
    fn triangle_vertices_feasible() {
        let p = samples::triangle();
        for x in [[1., 0., 0.], [0., 1., 0.], [0., 0., 1.], [0.25, 0.25, 0.5]] {
            assert!(check_feasibility_eq(&p, &CandidatePoint::equality(x.to_vec()).unwrap()));
        }
        assert!(!check_feasibility_eq(&p, &CandidatePoint::equality(vec![1., 1., 0.]).unwrap()));
    }

    #[test]
    fn midpoint_transport_optimum_is_robust_feasible() {
        let p = samples::transport_3x3(&samples::TRANSPORT_EDGES);
        let x = vec![0., 0., 100., 150., 10., 0., 0., 200., 50.];
        assert!(check_feasibility_eq(&p, &CandidatePoint::equality(x).unwrap()));
    }

    #[test]
    fn inequality_only_toy() {
        let p = IntervalLP::general(GeneralBlocks {
            eq_x: IntervalMatrix::zeros(0, 2),
            eq_y: IntervalMatrix::zeros(0, 0),
            ineq_x: IntervalMatrix::from_point(&nalgebra::DMatrix::from_row_slice(1, 2, &[1., 1.])),
            ineq_y: IntervalMatrix::zeros(1, 0),
            eq_rhs: IntervalVector::default(),
            ineq_rhs: IntervalVector::new(vec![Interval::new(0., 2.).unwrap()]),
            cost_x: IntervalVector::zeros(2),
            cost_y: IntervalVector::default(),
        })
        .unwrap();
        assert!(check_feasibility_gen(&p, &CandidatePoint::equality(vec![1., 0.]).unwrap()));
        let far = CandidatePoint::equality(vec![2., 1.]).unwrap();
        let rep = feasibility_report(&p, &far, 1e-9);
        assert_eq!(rep.violated, vec![0]);
        assert!(violation_certificate(&p, &far, &rep).verify(&p, &far, 1e-9));
    }

    #[test]
    fn violation_certificate_verifies() {
        let p = samples::triangle();
        let pt = CandidatePoint::equality(vec![0.5, 0.0, 0.0]).unwrap();
        let rep = feasibility_report(&p, &pt, 1e-9);
        assert_eq!(rep.violated, vec![0]);
        let cert = violation_certificate(&p, &pt, &rep);
        assert!(cert.verify(&p, &pt, 1e-9));
    }
}
