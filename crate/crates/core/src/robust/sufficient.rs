use nalgebra::{DMatrix, DVector};

use crate::enclosure::{enclose_square, enclose_stacked, orthonormal_nullspace, Enclosure};
use crate::interval::{IntervalMatrix, IntervalVector};
use crate::linprog::{lp_solve_with, LinearSystem, LpStatus, Sense};
use crate::model::{active_sets, CandidatePoint, IntervalLP};
use crate::timing::Stopwatch;

use super::feasibility::{feasibility_report, violation_certificate};
use super::{Certificate, CertificateKind, CheckOptions, Method, Optimality, Reduced, RobustError, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct SufficientResult {
    pub optimal: Optimality,
    /// Enclosure of the dual solutions `(u, v)` when one was computed.
    pub dual_box: Option<Enclosure>,
    /// Why the condition did not apply or failed.
    pub note: Option<String>,
}

impl SufficientResult {
    fn unknown(note: impl Into<String>) -> Self {
        Self { optimal: Optimality::Unknown, dual_box: None, note: Some(note.into()) }
    }
}

/// `[B̃ᵀ | −D̃ᵀ]`, the interval matrix of the dual equations.
fn dual_matrix(r: &Reduced) -> IntervalMatrix {
    r.b.transpose().hstack(&r.d.transpose().neg()).expect("column counts agree")
}

/// Relative slack absorbing rounding in the final comparisons; the
/// interval arithmetic is not outward rounded.
const ROUNDING_SLACK: f64 = 1e-12;

/// `v̲ ≥ 0` and `upper(Ãᵀu − C̃ᵀv) ≤ c̲̃` for the box `(u, v)`.
fn dual_box_passes(r: &Reduced, w: &IntervalVector) -> bool {
    let m = r.a.nrows();
    if w.len() != m + r.c.nrows() {
        return false;
    }
    let u = IntervalVector::new(w.as_slice()[..m].to_vec());
    let v = IntervalVector::new(w.as_slice()[m..].to_vec());
    if v.iter().any(|vi| vi.lo() < -ROUNDING_SLACK * (1.0 + vi.mag())) {
        return false;
    }
    let au = r.a.transpose().mul_ivec(&u).expect("shapes agree");
    let cv = r.c.transpose().mul_ivec(&v).expect("shapes agree");
    au.iter().zip(cv.iter()).zip(r.cost_fixed.iter()).all(|((a, c), cl)| {
        let lhs = (*a - *c).hi();
        lhs <= cl.lo() + ROUNDING_SLACK * (1.0 + a.mag() + c.mag() + cl.mag())
    })
}

/// Handles problems where the dual has no unknowns at all.
fn trivial_dual(r: &Reduced) -> Option<SufficientResult> {
    if r.a.nrows() + r.c.nrows() > 0 {
        return None;
    }
    let ok = r.n_free() == 0 && r.cost_fixed.iter().all(|c| c.lo() >= 0.0);
    Some(if ok {
        SufficientResult { optimal: Optimality::Yes, dual_box: Some(Enclosure { bounds: IntervalVector::default(), tight: true }), note: None }
    } else {
        SufficientResult::unknown("no dual unknowns and the criterion is not trivially satisfied")
    })
}

fn judge(r: &Reduced, enc: Enclosure) -> SufficientResult {
    if dual_box_passes(r, &enc.bounds) {
        SufficientResult { optimal: Optimality::Yes, dual_box: Some(enc), note: None }
    } else {
        SufficientResult { optimal: Optimality::Unknown, dual_box: Some(enc), note: Some("dual box fails the inequality test".into()) }
    }
}

/// Square case: the dual equations determine `(u, v)`; enclose and test.
pub fn sufficient_nondegenerate(p: &IntervalLP, pt: &CandidatePoint) -> Optimality {
    sufficient_nondegenerate_with(p, pt, &CheckOptions::default()).optimal
}

pub fn sufficient_nondegenerate_with(p: &IntervalLP, pt: &CandidatePoint, opts: &CheckOptions) -> SufficientResult {
    if pt.check_dims(p).is_err() {
        return SufficientResult::unknown("candidate dimensions do not match");
    }
    let r = Reduced::new(p, &active_sets(p, pt, opts.zero_tol));
    if let Some(res) = trivial_dual(&r) {
        return res;
    }
    let mat = dual_matrix(&r);
    if mat.nrows() != mat.ncols() {
        return SufficientResult::unknown(format!("dual system is {}×{}, not square", mat.nrows(), mat.ncols()));
    }
    match enclose_square(&mat, &r.cost_free) {
        Ok(enc) => judge(&r, enc),
        Err(e) => SufficientResult::unknown(e.to_string()),
    }
}

pub fn sufficient_degenerate(p: &IntervalLP, pt: &CandidatePoint) -> Optimality {
    sufficient_degenerate_with(p, pt, &CheckOptions::default()).optimal
}

/// Centering LP `max α` over the midpoint dual, then an enclosure of the
/// dual equations completed by the nullspace rows through the LP solution.
pub fn sufficient_degenerate_with(p: &IntervalLP, pt: &CandidatePoint, opts: &CheckOptions) -> SufficientResult {
    if pt.check_dims(p).is_err() {
        return SufficientResult::unknown("candidate dimensions do not match");
    }
    let r = Reduced::new(p, &active_sets(p, pt, opts.zero_tol));
    if let Some(res) = trivial_dual(&r) {
        return res;
    }
    let (m, nk, nf) = (r.a.nrows(), r.c.nrows(), r.n_fixed());
    let nw = m + nk;
    let a_mid = r.a.mid();
    let c_mid = r.c.mid();
    let cf = r.cost_fixed.mid();
    let cy = r.cost_free.mid();
    let m_mid = dual_matrix(&r).mid();

    let mut sys = LinearSystem::new(nw + 1);
    for i in 0..nf {
        let mut row: Vec<f64> = a_mid.column(i).iter().copied().collect();
        row.extend(c_mid.column(i).iter().map(|v| -v));
        row.push(1.0);
        sys.add_le(row, cf[i]);
    }
    for j in 0..m_mid.nrows() {
        let mut row: Vec<f64> = m_mid.row(j).iter().copied().collect();
        row.push(0.0);
        sys.add_eq(row, cy[j]);
    }
    for k in 0..nk {
        let mut row = vec![0.0; nw + 1];
        row[m + k] = -1.0;
        row[nw] = 1.0;
        sys.add_le(row, 0.0);
    }
    let mut obj = vec![0.0; nw + 1];
    obj[nw] = 1.0;
    let mut res = match lp_solve_with(&obj, &sys, Sense::Maximize, &opts.lp) {
        Ok(res) => res,
        Err(e) => return SufficientResult::unknown(format!("centering LP failed: {e}")),
    };
    if res.status == LpStatus::Unbounded {
        let cap = 1.0 + cf.iter().chain(cy.iter()).fold(0.0_f64, |a, v| a.max(v.abs()));
        let mut row = vec![0.0; nw + 1];
        row[nw] = 1.0;
        sys.add_le(row, cap);
        res = match lp_solve_with(&obj, &sys, Sense::Maximize, &opts.lp) {
            Ok(res) => res,
            Err(e) => return SufficientResult::unknown(format!("centering LP failed: {e}")),
        };
    }
    let (Some(point), LpStatus::Optimal) = (&res.point, res.status) else {
        return SufficientResult::unknown("midpoint dual system is infeasible");
    };
    let alpha = point[nw];
    if alpha < -opts.feas_tol * (1.0 + cf.amax()) {
        return SufficientResult::unknown(format!("centering LP optimum α = {alpha:.3e} is negative"));
    }
    let w = DVector::from_column_slice(&point[..nw]);
    let null = orthonormal_nullspace(&m_mid);
    if m_mid.nrows() + null.ncols() != nw {
        return SufficientResult::unknown("midpoint dual equations are rank deficient");
    }
    let bottom: DMatrix<f64> = null.transpose();
    let rhs = &bottom * &w;
    match enclose_stacked(&dual_matrix(&r), &r.cost_free, &bottom, &rhs) {
        Ok(enc) => judge(&r, enc),
        Err(e) => SufficientResult::unknown(e.to_string()),
    }
}

/// Feasibility test followed by the sufficient conditions. Never returns
/// `No` for a robust-feasible point.
pub fn check_sufficient(p: &IntervalLP, pt: &CandidatePoint, opts: &CheckOptions) -> Result<Verdict, RobustError> {
    let clock = Stopwatch::start();
    pt.check_dims(p)?;
    let report = feasibility_report(p, pt, opts.feas_tol);
    if !report.feasible {
        return Ok(Verdict {
            feasible: false,
            optimal: Optimality::No,
            certificate: Some(violation_certificate(p, pt, &report)),
            systems_checked: 0,
            elapsed: clock.elapsed(),
            method: Method::SufficientNondegenerate,
        });
    }
    let sets = active_sets(p, pt, opts.zero_tol);
    let mut method = Method::SufficientNondegenerate;
    let mut res = sufficient_nondegenerate_with(p, pt, opts);
    if res.optimal != Optimality::Yes {
        method = Method::SufficientDegenerate;
        let deg = sufficient_degenerate_with(p, pt, opts);
        if deg.optimal == Optimality::Yes || res.dual_box.is_none() {
            res = deg;
        } else {
            method = Method::SufficientNondegenerate;
        }
    }
    let certificate = res.dual_box.filter(|_| res.optimal == Optimality::Yes).map(|b| Certificate {
        kind: CertificateKind::DualEnclosure,
        sign_vector: None,
        witness: None,
        realization: None,
        dual_box: Some(b),
        active: Some(sets),
        rows: Vec::new(),
    });
    Ok(Verdict {
        feasible: true,
        optimal: res.optimal,
        certificate,
        systems_checked: 0,
        elapsed: clock.elapsed(),
        method,
    })
}

pub(super) fn verify_dual_box(cert: &Certificate, p: &IntervalLP) -> bool {
    match (&cert.active, &cert.dual_box) {
        (Some(sets), Some(b)) => dual_box_passes(&Reduced::new(p, sets), &b.bounds),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::model::samples;

    fn transport_candidate() -> CandidatePoint {
        CandidatePoint::equality(vec![0., 0., 99., 144., 0., 0., 0., 189., 36.]).unwrap()
    }

    #[test]
    fn point_lp_with_strict_dual_slack() {
        // min x1 + 2x2 + 3x3, x1 + x2 + x3 = 1: unique optimum e1
        let a = IntervalMatrix::from_point(&DMatrix::from_row_slice(1, 3, &[1., 1., 1.]));
        let p = IntervalLP::equality(a, IntervalVector::points(&[1.]), IntervalVector::points(&[1., 2., 3.])).unwrap();
        let pt = CandidatePoint::equality(vec![1., 0., 0.]).unwrap();
        assert_eq!(sufficient_nondegenerate(&p, &pt), Optimality::Yes);
        assert_eq!(sufficient_degenerate(&p, &pt), Optimality::Yes);
        let v = check_sufficient(&p, &pt, &CheckOptions::default()).unwrap();
        assert!(v.certificate.unwrap().verify(&p, &pt, 0.0));
    }

    #[test]
    fn transport_full_data_agrees_with_exact() {
        let p = samples::transport_3x3(&samples::TRANSPORT_EDGES);
        let pt = transport_candidate();
        let v = check_sufficient(&p, &pt, &CheckOptions::default()).unwrap();
        assert_ne!(v.optimal, Optimality::No);
        if v.optimal == Optimality::Yes {
            let exact = super::super::check_optimality_exact(&p, &pt, &CheckOptions::default()).unwrap();
            assert_eq!(exact.optimal, Optimality::Yes);
        }
    }

    #[test]
    fn transport_with_certain_edge_is_yes() {
        let p = samples::transport_3x3(&[(1, 2), (2, 0)]);
        let v = check_sufficient(&p, &transport_candidate(), &CheckOptions::default()).unwrap();
        assert_eq!(v.optimal, Optimality::Yes);
    }

    #[test]
    fn negative_alpha_is_unknown() {
        // x* = e3 is not even midpoint optimal
        let p = samples::triangle_with(Interval::point(1.5), Interval::new(-1., 1.).unwrap());
        let pt = CandidatePoint::equality(vec![0., 0., 1.]).unwrap();
        assert_eq!(sufficient_degenerate(&p, &pt), Optimality::Unknown);
    }
}
