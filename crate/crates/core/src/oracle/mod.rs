//! Brute-force robust optimality for small instances, written independently
//! of [`crate::robust`].
//!
//! Feasibility is decided on all vertex realizations of the uncertain
//! coefficients. Each realization (vertices, plus optional interior grid
//! values) is also tested for optimality with a plain phase-I LP. Because
//! optimality can fail strictly inside the box while holding at every
//! vertex, an exact sweep follows: for each orthant of the free part of an
//! improving direction `d`, the coefficient ranges of every row are linear
//! in `d`, which gives one LP per orthant.

use thiserror::Error;

use crate::interval::IntervalMatrix;
use crate::linprog::{lp_feasible, LinearSystem, LpError};
use crate::model::{CandidatePoint, IntervalLP, ModelError, DEFAULT_ZERO_TOL};
use crate::robust::{Certificate, CertificateKind, Direction, Method, Optimality, Realization, Verdict};
use crate::timing::Stopwatch;

pub const MAX_UNCERTAIN: usize = 16;
const MAX_REALIZATIONS: u64 = 1 << 20;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{0} uncertain entries exceed the oracle limit of {MAX_UNCERTAIN}")]
    TooManyUncertainEntries(usize),
    #[error("{0} realizations exceed the oracle limit")]
    TooManyRealizations(u64),
    #[error("{0} free direction components are too many for the orthant sweep")]
    TooManyOrthants(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Block {
    EqX,
    EqY,
    IneqX,
    IneqY,
    CostX,
    CostY,
}

/// Location of an uncertain coefficient.
#[derive(Clone, Copy, Debug)]
struct Slot {
    block: Block,
    row: usize,
    col: usize,
    lo: f64,
    hi: f64,
}

fn dense(m: &IntervalMatrix) -> Vec<Vec<f64>> {
    let c = m.mid();
    (0..c.nrows()).map(|i| c.row(i).iter().copied().collect()).collect()
}

fn uncertain_slots(p: &IntervalLP) -> Vec<Slot> {
    let mut out = Vec::new();
    let mut mat = |block, m: &IntervalMatrix| {
        for i in 0..m.nrows() {
            for (j, a) in m.row(i).iter().enumerate() {
                if !a.is_point() {
                    out.push(Slot { block, row: i, col: j, lo: a.lo(), hi: a.hi() });
                }
            }
        }
    };
    mat(Block::EqX, p.eq_x());
    mat(Block::EqY, p.eq_y());
    mat(Block::IneqX, p.ineq_x());
    mat(Block::IneqY, p.ineq_y());
    for (block, v) in [(Block::CostX, p.cost_x()), (Block::CostY, p.cost_y())] {
        for (j, a) in v.iter().enumerate() {
            if !a.is_point() {
                out.push(Slot { block, row: 0, col: j, lo: a.lo(), hi: a.hi() });
            }
        }
    }
    out
}

fn base_realization(p: &IntervalLP) -> Realization {
    Realization {
        eq_x: dense(p.eq_x()),
        eq_y: dense(p.eq_y()),
        ineq_x: dense(p.ineq_x()),
        ineq_y: dense(p.ineq_y()),
        cost_x: p.cost_x().iter().map(|a| a.lo()).collect(),
        cost_y: p.cost_y().iter().map(|a| a.lo()).collect(),
    }
}

fn set(r: &mut Realization, s: &Slot, v: f64) {
    match s.block {
        Block::EqX => r.eq_x[s.row][s.col] = v,
        Block::EqY => r.eq_y[s.row][s.col] = v,
        Block::IneqX => r.ineq_x[s.row][s.col] = v,
        Block::IneqY => r.ineq_y[s.row][s.col] = v,
        Block::CostX => r.cost_x[s.col] = v,
        Block::CostY => r.cost_y[s.col] = v,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn row_value(rx: &[f64], ry: &[f64], x: &[f64], y: &[f64]) -> (f64, f64) {
    let v = dot(rx, x) + dot(ry, y);
    let scale = 1.0 + rx.iter().zip(x).chain(ry.iter().zip(y)).map(|(a, b)| (a * b).abs()).sum::<f64>();
    (v, scale)
}

/// Rows violated by the point under realization `r`: equations outside
/// `b`, inequalities above `ā`.
fn infeasible_rows(p: &IntervalLP, r: &Realization, x: &[f64], y: &[f64]) -> Vec<usize> {
    let mut bad = Vec::new();
    for i in 0..p.m() {
        let (v, sc) = row_value(&r.eq_x[i], &r.eq_y[i], x, y);
        let b = p.eq_rhs()[i];
        if v > b.hi() + FEAS_TOL * (sc + b.mag()) || v < b.lo() - FEAS_TOL * (sc + b.mag()) {
            bad.push(i);
        }
    }
    for k in 0..p.m_prime() {
        let (v, sc) = row_value(&r.ineq_x[k], &r.ineq_y[k], x, y);
        let a = p.ineq_rhs()[k];
        if v > a.hi() + FEAS_TOL * (sc + a.mag()) {
            bad.push(p.m() + k);
        }
    }
    bad
}

/// Inequality rows that the best-response right-hand side can make active.
fn activatable(p: &IntervalLP, r: &Realization, x: &[f64], y: &[f64]) -> Vec<usize> {
    (0..p.m_prime())
        .filter(|&k| {
            let lo = p.ineq_rhs()[k].lo();
            dot(&r.ineq_x[k], x) + dot(&r.ineq_y[k], y) >= lo - DEFAULT_ZERO_TOL * (1.0 + lo.abs())
        })
        .collect()
}

/// Rows active for every realization: the minimum of each row over its own
/// coefficient box, found by enumerating that row's extreme points.
fn always_active(p: &IntervalLP, x: &[f64], y: &[f64]) -> Vec<usize> {
    (0..p.m_prime())
        .filter(|&k| {
            let entries: Vec<(f64, f64, f64)> = p
                .ineq_x()
                .row(k)
                .iter()
                .zip(x)
                .chain(p.ineq_y().row(k).iter().zip(y))
                .map(|(a, &v)| (a.lo(), a.hi(), v))
                .collect();
            let free: Vec<usize> = (0..entries.len()).filter(|&j| entries[j].0 != entries[j].1).collect();
            let mut min = f64::INFINITY;
            for mask in 0..(1u64 << free.len().min(20)) {
                let mut v = 0.0;
                let mut f = 0;
                for (j, &(lo, hi, val)) in entries.iter().enumerate() {
                    let coef = if f < free.len() && free[f] == j {
                        f += 1;
                        if mask >> (f - 1) & 1 == 1 { hi } else { lo }
                    } else {
                        lo
                    };
                    v += coef * val;
                }
                min = min.min(v);
            }
            let lo = p.ineq_rhs()[k].lo();
            min >= lo - DEFAULT_ZERO_TOL * (1.0 + lo.abs())
        })
        .collect()
}

/// Improving feasible directions at the point for one realization:
/// `cᵀd_x + dᵀd_y ≤ −1`, `A d_x + B d_y = 0`, active rows `≤ 0`,
/// `d_i ≥ 0` where `x_i = 0`.
fn point_system(p: &IntervalLP, r: &Realization, zero: &[usize], rows: &[usize]) -> LinearSystem {
    let (n, np) = (p.n(), p.n_prime());
    let mut sys = LinearSystem::new(n + np);
    for &i in zero {
        sys.set_nonneg(i, true);
    }
    let cat = |a: &[f64], b: &[f64]| a.iter().chain(b).copied().collect::<Vec<f64>>();
    sys.add_le(cat(&r.cost_x, &r.cost_y), -1.0);
    for i in 0..p.m() {
        sys.add_eq(cat(&r.eq_x[i], &r.eq_y[i]), 0.0);
    }
    for &k in rows {
        sys.add_le(cat(&r.ineq_x[k], &r.ineq_y[k]), 0.0);
    }
    sys
}

/// Per-entry values visited: both bounds plus `grid` interior points.
fn values(s: &Slot, grid: usize) -> Vec<f64> {
    let mut v = vec![s.lo, s.hi];
    for t in 1..=grid {
        v.push(s.lo + (s.hi - s.lo) * t as f64 / (grid + 1) as f64);
    }
    v
}

/// Extreme coefficient of `a` that minimizes (`low`) or maximizes `a·d`
/// given the sign `sd` of `d`.
fn extreme(lo: f64, hi: f64, sd: f64, low: bool) -> f64 {
    if (sd >= 0.0) == low {
        lo
    } else {
        hi
    }
}

/// Orthant sweep: returns the first improving direction found.
fn orthant_sweep(
    p: &IntervalLP,
    zero: &[usize],
    positive: &[usize],
    rows: &[usize],
    checked: &mut u64,
) -> Result<Option<Vec<f64>>, OracleError> {
    let (n, np) = (p.n(), p.n_prime());
    let free: Vec<usize> = positive.iter().copied().chain((0..np).map(|l| n + l)).collect();
    if free.len() > 24 {
        return Err(OracleError::TooManyOrthants(free.len()));
    }
    // sign of each direction component for orthant σ
    for sigma in 0..(1u64 << free.len()) {
        let mut sd = vec![1.0; n + np];
        for (t, &j) in free.iter().enumerate() {
            if sigma >> t & 1 == 1 {
                sd[j] = -1.0;
            }
        }
        let row = |mx: &IntervalMatrix, my: &IntervalMatrix, i: usize, low: bool| -> Vec<f64> {
            mx.row(i)
                .iter()
                .chain(my.row(i).iter())
                .enumerate()
                .map(|(j, a)| extreme(a.lo(), a.hi(), sd[j], low))
                .collect()
        };
        let mut sys = LinearSystem::new(n + np);
        for &i in zero {
            sys.set_nonneg(i, true);
        }
        for (t, &j) in free.iter().enumerate() {
            let mut e = vec![0.0; n + np];
            e[j] = if sigma >> t & 1 == 1 { 1.0 } else { -1.0 };
            sys.add_le(e, 0.0);
        }
        let cost: Vec<f64> = p
            .cost_x()
            .iter()
            .chain(p.cost_y().iter())
            .enumerate()
            .map(|(j, a)| extreme(a.lo(), a.hi(), sd[j], true))
            .collect();
        sys.add_le(cost, -1.0);
        for i in 0..p.m() {
            sys.add_le(row(p.eq_x(), p.eq_y(), i, true), 0.0);
            sys.add_ge(row(p.eq_x(), p.eq_y(), i, false), 0.0);
        }
        for &k in rows {
            sys.add_le(row(p.ineq_x(), p.ineq_y(), k, true), 0.0);
        }
        *checked += 1;
        let res = lp_feasible(&sys)?;
        if res.is_feasible() {
            return Ok(res.point);
        }
    }
    Ok(None)
}

/// Realization under which `d` improves the point: each equation row
/// interpolated between its extremes along `d` so that it vanishes.
fn realize_direction(p: &IntervalLP, x: &[f64], y: &[f64], rows: &[usize], d: &[f64]) -> Realization {
    let n = p.n();
    let mut r = base_realization(p);
    let pick = |a: &crate::interval::Interval, v: f64, low: bool| extreme(a.lo(), a.hi(), v, low);
    for i in 0..p.m() {
        let entries: Vec<_> = p.eq_x().row(i).iter().chain(p.eq_y().row(i).iter()).collect();
        let lo: Vec<f64> = entries.iter().zip(d).map(|(a, &v)| pick(a, v, true)).collect();
        let hi: Vec<f64> = entries.iter().zip(d).map(|(a, &v)| pick(a, v, false)).collect();
        let (vl, vh) = (dot(&lo, d), dot(&hi, d));
        let theta = if vh > vl { (-vl / (vh - vl)).clamp(0.0, 1.0) } else { 0.0 };
        let mixed: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + theta * (b - a)).collect();
        r.eq_x[i] = mixed[..n].to_vec();
        r.eq_y[i] = mixed[n..].to_vec();
    }
    for k in 0..p.m_prime() {
        let entries: Vec<_> = p.ineq_x().row(k).iter().chain(p.ineq_y().row(k).iter()).collect();
        let along: Vec<f64> = if rows.contains(&k) { d.to_vec() } else { x.iter().chain(y).copied().collect() };
        let vals: Vec<f64> = entries.iter().zip(&along).map(|(a, &v)| pick(a, v, true)).collect();
        r.ineq_x[k] = vals[..n].to_vec();
        r.ineq_y[k] = vals[n..].to_vec();
    }
    let costs: Vec<f64> = p.cost_x().iter().chain(p.cost_y().iter()).zip(d).map(|(a, &v)| pick(a, v, true)).collect();
    r.cost_x = costs[..n].to_vec();
    r.cost_y = costs[n..].to_vec();
    r
}

fn refuted(kind: CertificateKind, realization: Realization, witness: Option<Direction>, rows: Vec<usize>) -> Certificate {
    Certificate { kind, sign_vector: None, witness, realization: Some(realization), dual_box: None, active: None, rows }
}

/// Brute-force verdict for `pt`; `grid` adds interior values per uncertain
/// entry to the realization scan.
pub fn oracle_robust_optimal(p: &IntervalLP, pt: &CandidatePoint, grid: usize) -> Result<Verdict, OracleError> {
    let clock = Stopwatch::start();
    pt.check_dims(p)?;
    let slots = uncertain_slots(p);
    if slots.len() > MAX_UNCERTAIN {
        return Err(OracleError::TooManyUncertainEntries(slots.len()));
    }
    let per = (grid + 2) as u64;
    let total = per.checked_pow(slots.len() as u32).filter(|t| *t <= MAX_REALIZATIONS);
    let Some(total) = total else {
        return Err(OracleError::TooManyRealizations(per.saturating_pow(slots.len() as u32)));
    };
    let (x, y) = (pt.x(), pt.y());
    let zero: Vec<usize> = (0..p.n()).filter(|&i| x[i].abs() <= DEFAULT_ZERO_TOL).collect();
    let positive: Vec<usize> = (0..p.n()).filter(|&i| x[i].abs() > DEFAULT_ZERO_TOL).collect();
    let vals: Vec<Vec<f64>> = slots.iter().map(|s| values(s, grid)).collect();
    let mut checked = 0u64;
    let done = |optimal, certificate, checked, feasible| Verdict {
        feasible,
        optimal,
        certificate,
        systems_checked: checked,
        elapsed: clock.elapsed(),
        method: Method::Oracle,
    };

    // vertex realizations decide feasibility exactly
    for code in 0..(1u64 << slots.len()) {
        let mut r = base_realization(p);
        for (t, s) in slots.iter().enumerate() {
            set(&mut r, s, if code >> t & 1 == 1 { s.hi } else { s.lo });
        }
        let bad = infeasible_rows(p, &r, x, y);
        if !bad.is_empty() {
            let cert = refuted(CertificateKind::FeasibilityViolation, r, None, bad);
            return Ok(done(Optimality::No, Some(cert), checked, false));
        }
    }

    // each sampled realization with its best-response active rows
    for code in 0..total {
        let mut r = base_realization(p);
        let mut c = code;
        for (t, s) in slots.iter().enumerate() {
            set(&mut r, s, vals[t][(c % per) as usize]);
            c /= per;
        }
        let rows = activatable(p, &r, x, y);
        checked += 1;
        let res = lp_feasible(&point_system(p, &r, &zero, &rows))?;
        if let (true, Some(d)) = (res.is_feasible(), res.point) {
            let dir = Direction { x: d[..p.n()].to_vec(), y: d[p.n()..].to_vec() };
            let cert = refuted(CertificateKind::OptimalityCounterexample, r, Some(dir), rows);
            return Ok(done(Optimality::No, Some(cert), checked, true));
        }
    }

    let rows = always_active(p, x, y);
    if let Some(d) = orthant_sweep(p, &zero, &positive, &rows, &mut checked)? {
        let r = realize_direction(p, x, y, &rows, &d);
        let dir = Direction { x: d[..p.n()].to_vec(), y: d[p.n()..].to_vec() };
        let cert = refuted(CertificateKind::OptimalityCounterexample, r, Some(dir), rows);
        return Ok(done(Optimality::No, Some(cert), checked, true));
    }
    Ok(done(Optimality::Yes, None, checked, true))
}
