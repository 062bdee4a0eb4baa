//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_ilp::candidate::find_candidate;
use robust_ilp::interval::{Interval, IntervalMatrix, IntervalVector};
use robust_ilp::linprog::{lp_feasible, LinearSystem};
use robust_ilp::model::{CandidatePoint, GeneralBlocks, IntervalLP};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn int(rng: &mut impl Rng, lo: i32, hi: i32) -> f64 {
    rng.random_range(lo..=hi) as f64
}

fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i32, hi: i32) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| int(rng, lo, hi))
}

/// Nonnegative point with roughly half of its entries zero.
fn sparse_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.5) { 0.0 } else { int(rng, 1, 3) }).collect()
}

/// Costs that make `x` optimal at the midpoint about half of the time:
/// `c = Aᵀu + r` with `r ≥ 0` vanishing on the support of `x`.
fn costs_for(rng: &mut impl Rng, a: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    if rng.random_bool(0.5) {
        return (0..a.ncols()).map(|_| int(rng, -3, 3)).collect();
    }
    let u: Vec<f64> = (0..a.nrows()).map(|_| int(rng, -2, 2)).collect();
    (0..a.ncols())
        .map(|j| {
            let atu: f64 = (0..a.nrows()).map(|i| a[(i, j)] * u[i]).sum();
            atu + if x[j] > 0.0 { 0.0 } else { int(rng, 0, 2) }
        })
        .collect()
}

fn radius(rng: &mut impl Rng) -> f64 {
    [0.25, 0.5, 1.0][rng.random_range(0..3)]
}

/// Equality-form instance with between half of and all of `max_uncertain`
/// uncertain entries of `A` and `c`, and a nonnegative point to check. The
/// point is either the generating point or the heuristic candidate.
pub fn random_equality(rng: &mut impl Rng, n: usize, m: usize, max_uncertain: usize) -> (IntervalLP, CandidatePoint) {
    let a = int_matrix(rng, m, n, -2, 2);
    let x = sparse_point(rng, n);
    let c = costs_for(rng, &a, &x);
    let bc = &a * nalgebra::DVector::from_column_slice(&x);
    let mut a_iv: Vec<Interval> = a.transpose().iter().map(|&v| Interval::point(v)).collect();
    let mut c_iv: Vec<Interval> = c.iter().map(|&v| Interval::point(v)).collect();
    let cap = max_uncertain.min(m * n + n);
    let k = rng.random_range(cap / 2..=cap);
    for slot in sample(rng, m * n + n, k) {
        let r = radius(rng);
        if slot < m * n {
            a_iv[slot] = Interval::from_mid_rad(a_iv[slot].mid(), r).unwrap();
        } else {
            c_iv[slot - m * n] = Interval::from_mid_rad(c_iv[slot - m * n].mid(), r).unwrap();
        }
    }
    let b: IntervalVector =
        bc.iter().map(|&v| Interval::from_mid_rad(v, [0.0, 0.5, 1.0, 2.0][rng.random_range(0..4)]).unwrap()).collect();
    let p = IntervalLP::equality(IntervalMatrix::from_row_major(m, n, a_iv).unwrap(), b, IntervalVector::new(c_iv))
        .unwrap();
    let pt = match rng.random_bool(0.3).then(|| find_candidate(&p).ok().flatten()).flatten() {
        Some(cand) => cand,
        None => CandidatePoint::equality(x).unwrap(),
    };
    (p, pt)
}

/// General-form instance `Ax + By = b, Cx + Dy ≤ a, x ≥ 0` with at most
/// `max_uncertain` uncertain matrix and cost entries, and the generating
/// point `(x, y)`.
pub fn random_general(
    rng: &mut impl Rng,
    (n, n_free): (usize, usize),
    (m, m_ineq): (usize, usize),
    max_uncertain: usize,
) -> (IntervalLP, CandidatePoint) {
    let a = int_matrix(rng, m, n, -2, 2);
    let b = int_matrix(rng, m, n_free, -2, 2);
    let c = int_matrix(rng, m_ineq, n, -2, 2);
    let d = int_matrix(rng, m_ineq, n_free, -2, 2);
    let x = sparse_point(rng, n);
    let y: Vec<f64> = (0..n_free).map(|_| int(rng, -2, 2)).collect();
    let xv = nalgebra::DVector::from_column_slice(&x);
    let yv = nalgebra::DVector::from_column_slice(&y);
    let eq_mid = &a * &xv + &b * &yv;
    let ineq_val = &c * &xv + &d * &yv;
    let mut mats: Vec<Vec<Interval>> = [&a, &b, &c, &d]
        .iter()
        .map(|mat| mat.transpose().iter().map(|&v| Interval::point(v)).collect())
        .collect();
    let mut costs: Vec<Interval> = (0..n + n_free).map(|_| Interval::point(int(rng, -3, 3))).collect();
    let sizes: Vec<usize> = mats.iter().map(Vec::len).chain(std::iter::once(costs.len())).collect();
    let total: usize = sizes.iter().sum();
    let k = rng.random_range(0..=max_uncertain.min(total));
    for mut slot in sample(rng, total, k) {
        let r = radius(rng);
        let mut block = 0;
        while slot >= sizes[block] {
            slot -= sizes[block];
            block += 1;
        }
        let entry = if block < 4 { &mut mats[block][slot] } else { &mut costs[slot] };
        *entry = Interval::from_mid_rad(entry.mid(), r).unwrap();
    }
    let rhs_eq: IntervalVector = eq_mid.iter().map(|&v| Interval::from_mid_rad(v, radius(rng)).unwrap()).collect();
    // the upper end sits at, above or below the nominal row value
    let rhs_ineq: IntervalVector = ineq_val
        .iter()
        .map(|&v| {
            let hi = v + int(rng, -1, 2);
            Interval::new(hi - int(rng, 0, 3), hi).unwrap()
        })
        .collect();
    let mut mats = mats.into_iter();
    let mut block = |rows, cols| IntervalMatrix::from_row_major(rows, cols, mats.next().unwrap()).unwrap();
    let blocks = GeneralBlocks {
        eq_x: block(m, n),
        eq_y: block(m, n_free),
        ineq_x: block(m_ineq, n),
        ineq_y: block(m_ineq, n_free),
        eq_rhs: rhs_eq,
        ineq_rhs: rhs_ineq,
        cost_x: IntervalVector::new(costs[..n].to_vec()),
        cost_y: IntervalVector::new(costs[n..].to_vec()),
    };
    (IntervalLP::general(blocks).unwrap(), CandidatePoint::new(x, y).unwrap())
}

/// Classical optimality of `pt` for a point problem: some `(u, v)` with
/// `v ≥ 0`, `v = 0` on slack rows, `Aᵀu − Cᵀv ≤ c` with equality on the
/// support of `x`, and `Bᵀu − Dᵀv = d`.
pub fn kkt_optimal(p: &IntervalLP, pt: &CandidatePoint, tol: f64) -> bool {
    let (m, mp, n, np) = (p.m(), p.m_prime(), p.n(), p.n_prime());
    let a = p.eq_x().mid();
    let b = p.eq_y().mid();
    let c = p.ineq_x().mid();
    let d = p.ineq_y().mid();
    let (x, y) = (pt.x(), pt.y());
    let mut sys = LinearSystem::new(m + mp);
    for k in 0..mp {
        sys.set_nonneg(m + k, true);
        let row_val: f64 = (0..n).map(|j| c[(k, j)] * x[j]).sum::<f64>() + (0..np).map(|j| d[(k, j)] * y[j]).sum::<f64>();
        let a_hi = p.ineq_rhs()[k].hi();
        if row_val < a_hi - tol * (1.0 + a_hi.abs()) {
            let mut row = vec![0.0; m + mp];
            row[m + k] = 1.0;
            sys.add_eq(row, 0.0);
        }
    }
    for j in 0..n {
        let row: Vec<f64> = (0..m).map(|i| a[(i, j)]).chain((0..mp).map(|k| -c[(k, j)])).collect();
        let cj = p.cost_x()[j].mid();
        if x[j] > tol { sys.add_eq(row, cj) } else { sys.add_le(row, cj) };
    }
    for j in 0..np {
        let row: Vec<f64> = (0..m).map(|i| b[(i, j)]).chain((0..mp).map(|k| -d[(k, j)])).collect();
        sys.add_eq(row, p.cost_y()[j].mid());
    }
    lp_feasible(&sys).unwrap().is_feasible()
}

/// Zero-radius equality-form LP with a point that is optimal (an LP vertex)
/// or merely feasible.
pub fn random_point_lp(rng: &mut impl Rng, n: usize, m: usize) -> (IntervalLP, CandidatePoint) {
    let a = int_matrix(rng, m, n, -2, 3);
    let x = sparse_point(rng, n);
    let c = costs_for(rng, &a, &x);
    let b = &a * nalgebra::DVector::from_column_slice(&x);
    let p = IntervalLP::equality(
        IntervalMatrix::from_point(&a),
        IntervalVector::points(b.as_slice()),
        IntervalVector::points(&c),
    )
    .unwrap();
    (p, CandidatePoint::equality(x).unwrap())
}
