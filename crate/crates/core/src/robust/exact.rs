use nalgebra::{DMatrix, DVector};

use crate::interval::{IntervalMatrix, IntervalVector, SignVector};
use crate::linprog::{lp_feasible_with, LinearSystem, LpError};
use crate::model::{active_sets, ActiveSets, CandidatePoint, IntervalLP};
use crate::timing::Stopwatch;

use super::feasibility::{dot, feasibility_report, realization_within, violation_certificate};
use super::{
    Certificate, CertificateKind, CheckOptions, Direction, Method, Optimality, Realization, Reduced, RobustError,
    Verdict,
};

/// Dense bounds of the reduced blocks, shared by all sign systems.
pub(crate) struct SignSystems {
    nf: usize,
    equality_form: bool,
    a_lo: DMatrix<f64>,
    a_hi: DMatrix<f64>,
    b_mid: DMatrix<f64>,
    b_rad: DMatrix<f64>,
    c_lo: DMatrix<f64>,
    d_mid: DMatrix<f64>,
    d_rad: DMatrix<f64>,
    cf_lo: DVector<f64>,
    cf_hi: DVector<f64>,
    cy_mid: DVector<f64>,
    cy_rad: DVector<f64>,
}

impl SignSystems {
    pub(crate) fn new(r: &Reduced) -> Self {
        Self {
            nf: r.n_fixed(),
            equality_form: r.equality_form,
            a_lo: r.a.lo(),
            a_hi: r.a.hi(),
            b_mid: r.b.mid(),
            b_rad: r.b.rad(),
            c_lo: r.c.lo(),
            d_mid: r.d.mid(),
            d_rad: r.d.rad(),
            cf_lo: r.cost_fixed.lo(),
            cf_hi: r.cost_fixed.hi(),
            cy_mid: r.cost_free.mid(),
            cy_rad: r.cost_free.rad(),
        }
    }

    pub(crate) fn n_free(&self) -> usize {
        self.cy_mid.len()
    }

    pub(crate) fn build(&self, s: &SignVector) -> LinearSystem {
        let (nf, ny) = (self.nf, self.n_free());
        let mut sys = LinearSystem::new(nf + ny);
        (0..nf).for_each(|j| {
            sys.set_nonneg(j, true);
        });
        let row = |fixed: &mut dyn Iterator<Item = f64>, free: &mut dyn Iterator<Item = f64>| {
            let mut v: Vec<f64> = fixed.collect();
            v.extend(free);
            v
        };
        let sj = |j: usize| s.get(j);
        sys.add_le(
            row(&mut self.cf_lo.iter().copied(), &mut (0..ny).map(|j| self.cy_mid[j] - self.cy_rad[j] * sj(j))),
            -1.0,
        );
        if self.equality_form {
            sys.add_le(
                row(&mut self.cf_hi.iter().map(|v| -v), &mut (0..ny).map(|j| -(self.cy_mid[j] + self.cy_rad[j] * sj(j)))),
                1.0,
            );
        }
        for r in 0..self.b_mid.nrows() {
            sys.add_le(
                row(
                    &mut self.a_lo.row(r).iter().copied(),
                    &mut (0..ny).map(|j| self.b_mid[(r, j)] - self.b_rad[(r, j)] * sj(j)),
                ),
                0.0,
            );
            sys.add_le(
                row(
                    &mut self.a_hi.row(r).iter().map(|v| -v),
                    &mut (0..ny).map(|j| -(self.b_mid[(r, j)] + self.b_rad[(r, j)] * sj(j))),
                ),
                0.0,
            );
        }
        for k in 0..self.d_mid.nrows() {
            sys.add_le(
                row(
                    &mut self.c_lo.row(k).iter().copied(),
                    &mut (0..ny).map(|j| self.d_mid[(k, j)] - self.d_rad[(k, j)] * sj(j)),
                ),
                0.0,
            );
        }
        sys
    }
}

/// The linear system whose feasibility refutes optimality for sign vector
/// `s`, over reduced variables `(x̃ ≥ 0, ỹ)`.
pub fn sign_system(r: &Reduced, s: &SignVector) -> LinearSystem {
    SignSystems::new(r).build(s)
}

fn count_label(len: usize) -> String {
    format!("2^{len}")
}

/// Outcome of scanning every sign vector for fixed active sets.
pub(crate) struct Scan {
    pub checked: u64,
    /// First feasible system in Gray order: `(index, s, reduced point)`.
    pub counterexample: Option<(u64, SignVector, Vec<f64>)>,
}

pub(crate) fn scan(r: &Reduced, opts: &CheckOptions) -> Result<Scan, RobustError> {
    let len = r.n_free();
    if len >= 63 || (1u64 << len) > opts.budget {
        return Err(RobustError::BudgetExceeded { systems: count_label(len), budget: opts.budget });
    }
    let total = 1u64 << len;
    let systems = SignSystems::new(r);
    let cfg = opts.lp;
    let run = |g: u64| -> Result<Option<Vec<f64>>, LpError> {
        let s = SignVector::gray(g, len);
        let res = lp_feasible_with(&systems.build(&s), &cfg)?;
        Ok(if res.is_feasible() { res.point } else { None })
    };
    let hit = find_first(total, opts.parallel, &run);
    match hit {
        None => Ok(Scan { checked: total, counterexample: None }),
        Some((_, Err(e))) => Err(e.into()),
        Some((g, Ok(Some(z)))) => {
            Ok(Scan { checked: g + 1, counterexample: Some((g, SignVector::gray(g, len), z)) })
        }
        Some((_, Ok(None))) => unreachable!("filtered"),
    }
}

type Hit<T> = Option<(u64, Result<Option<T>, LpError>)>;

fn find_first<T: Send>(total: u64, parallel: bool, run: &(dyn Fn(u64) -> Result<Option<T>, LpError> + Sync)) -> Hit<T> {
    let interesting = |r: &Result<Option<T>, LpError>| !matches!(r, Ok(None));
    #[cfg(feature = "parallel")]
    if parallel && total > 1 {
        use rayon::prelude::*;
        return (0..total).into_par_iter().map(|g| (g, run(g))).find_first(|(_, r)| interesting(r));
    }
    let _ = parallel;
    (0..total).map(|g| (g, run(g))).find(|(_, r)| interesting(r))
}

/// Whether the optimality criterion holds for the given active sets,
/// independent of any particular point.
pub fn criterion_holds(p: &IntervalLP, sets: &ActiveSets, opts: &CheckOptions) -> Result<bool, RobustError> {
    Ok(scan(&Reduced::new(p, sets), opts)?.counterexample.is_none())
}

/// Exact robust optimality by enumerating all `2^{|J|+n'}` sign systems.
pub fn check_optimality_exact(p: &IntervalLP, pt: &CandidatePoint, opts: &CheckOptions) -> Result<Verdict, RobustError> {
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
            method: Method::Exact,
        });
    }
    let sets = active_sets(p, pt, opts.zero_tol);
    let red = Reduced::new(p, &sets);
    let scan = scan(&red, opts)?;
    let certificate = scan.counterexample.map(|(_, s, z)| {
        let dir = red.expand(&z);
        Certificate {
            kind: CertificateKind::OptimalityCounterexample,
            realization: Some(counterexample_realization(p, pt, &sets, &dir)),
            sign_vector: Some(s),
            witness: Some(dir),
            dual_box: None,
            active: Some(sets.clone()),
            rows: Vec::new(),
        }
    });
    Ok(Verdict {
        feasible: true,
        optimal: if certificate.is_some() { Optimality::No } else { Optimality::Yes },
        certificate,
        systems_checked: scan.checked,
        elapsed: clock.elapsed(),
        method: Method::Exact,
    })
}

/// Entry of `m` that minimizes `a·v`.
fn argmin_entry(lo: f64, hi: f64, v: f64) -> (f64, f64) {
    if v >= 0.0 {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// Row realization of `[mx | my]` with `row·(dx, dy) = 0` when the interval
/// range contains zero.
fn balanced_row(mx: &IntervalMatrix, my: &IntervalMatrix, i: usize, dx: &[f64], dy: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = |m: &IntervalMatrix, d: &[f64]| -> (Vec<f64>, Vec<f64>) {
        m.row(i).iter().zip(d).map(|(a, &v)| argmin_entry(a.lo(), a.hi(), v)).unzip()
    };
    let (lx, hx) = pick(mx, dx);
    let (ly, hy) = pick(my, dy);
    let lo = dot(&lx, dx) + dot(&ly, dy);
    let hi = dot(&hx, dx) + dot(&hy, dy);
    let theta = if hi > lo { (-lo / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
    let mix = |l: &[f64], h: &[f64]| l.iter().zip(h).map(|(a, b)| a + theta * (b - a)).collect::<Vec<f64>>();
    (mix(&lx, &hx), mix(&ly, &hy))
}

fn min_row(mx: &IntervalMatrix, my: &IntervalMatrix, i: usize, dx: &[f64], dy: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = |m: &IntervalMatrix, d: &[f64]| m.row(i).iter().zip(d).map(|(a, &v)| argmin_entry(a.lo(), a.hi(), v).0).collect();
    (pick(mx, dx), pick(my, dy))
}

fn min_vec(iv: &IntervalVector, d: &[f64]) -> Vec<f64> {
    iv.iter().zip(d).map(|(a, &v)| argmin_entry(a.lo(), a.hi(), v).0).collect()
}

/// Realization in which `dir` is an improving feasible direction at the
/// point: equations balanced to `A d = 0`, costs and active inequality rows
/// minimized along `dir`, inactive rows minimized at the point.
pub(crate) fn counterexample_realization(
    p: &IntervalLP,
    pt: &CandidatePoint,
    sets: &ActiveSets,
    dir: &Direction,
) -> Realization {
    let mut r = Realization::default();
    for i in 0..p.m() {
        let (x, y) = balanced_row(p.eq_x(), p.eq_y(), i, &dir.x, &dir.y);
        r.eq_x.push(x);
        r.eq_y.push(y);
    }
    for k in 0..p.m_prime() {
        let (x, y) = if sets.ineq_active.contains(&k) {
            min_row(p.ineq_x(), p.ineq_y(), k, &dir.x, &dir.y)
        } else {
            min_row(p.ineq_x(), p.ineq_y(), k, pt.x(), pt.y())
        };
        r.ineq_x.push(x);
        r.ineq_y.push(y);
    }
    r.cost_x = min_vec(p.cost_x(), &dir.x);
    r.cost_y = min_vec(p.cost_y(), &dir.y);
    r
}

pub(super) fn verify_counterexample(cert: &Certificate, p: &IntervalLP, pt: &CandidatePoint, tol: f64) -> bool {
    let (Some(sets), Some(s), Some(dir)) = (&cert.active, &cert.sign_vector, &cert.witness) else {
        return false;
    };
    if dir.x.len() != p.n() || dir.y.len() != p.n_prime() || pt.check_dims(p).is_err() {
        return false;
    }
    let red = Reduced::new(p, sets);
    if s.len() != red.n_free() {
        return false;
    }
    let z = red.restrict(dir);
    if sign_system(&red, s).max_violation(&z) > tol {
        return false;
    }
    let Some(r) = &cert.realization else { return true };
    if !realization_within(r, p, tol) {
        return false;
    }
    let scaled_zero = |row_x: &[f64], row_y: &[f64]| {
        let v = dot(row_x, &dir.x) + dot(row_y, &dir.y);
        let scale: f64 = 1.0
            + row_x.iter().zip(&dir.x).map(|(a, b)| (a * b).abs()).sum::<f64>()
            + row_y.iter().zip(&dir.y).map(|(a, b)| (a * b).abs()).sum::<f64>();
        (v, scale)
    };
    let eq_ok = (0..p.m()).all(|i| {
        let (v, sc) = scaled_zero(&r.eq_x[i], &r.eq_y[i]);
        v.abs() <= tol * sc
    });
    let ineq_ok = (0..p.m_prime()).all(|k| {
        if sets.ineq_active.contains(&k) {
            let (v, sc) = scaled_zero(&r.ineq_x[k], &r.ineq_y[k]);
            v <= tol * sc
        } else {
            dot(&r.ineq_x[k], pt.x()) + dot(&r.ineq_y[k], pt.y()) < p.ineq_rhs()[k].lo()
        }
    });
    let sign_ok = sets.zero.iter().all(|&i| dir.x[i] >= -tol) && sets.positive.iter().all(|&j| pt.x()[j] > 0.0);
    let improving = dot(&r.cost_x, &dir.x) + dot(&r.cost_y, &dir.y) < 0.0;
    eq_ok && ineq_ok && sign_ok && improving
}
