//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so the lines are always printed; exits non-zero on any FAIL.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use robust_ilp::bench::{run_table1, BenchConfig};
use robust_ilp::candidate::{find_candidate, find_candidate_eq, midpoint_objective};
use robust_ilp::enclosure::enclose_square;
use robust_ilp::interval::{imatmul_iv, imatvec, Interval, IntervalMatrix, IntervalVector};
use robust_ilp::model::{load_diet, load_problem, samples, CandidatePoint, DietOptions, IntervalLP};
use robust_ilp::oracle::oracle_robust_optimal;
use robust_ilp::robust::{
    check_feasibility, check_feasibility_eq, check_optimality_exact, check_sufficient, enumerate_robust_components,
    sufficient_degenerate, sufficient_nondegenerate, CheckOptions, Optimality,
};

use common::{data_path, kkt_optimal, random_equality, random_general, random_point_lp, rng};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn eq_point(x: &[f64]) -> CandidatePoint {
    CandidatePoint::equality(x.to_vec()).unwrap()
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn within(elapsed: Duration, limit: Duration, failures: &mut Vec<String>) {
    if elapsed > limit {
        failures.push(format!("took {elapsed:.2?}, limit {limit:.0?}"));
    }
}

fn summarize(failures: Vec<String>, ok_detail: String) -> Outcome {
    if failures.is_empty() {
        outcome(true, ok_detail)
    } else {
        outcome(false, failures.join("; "))
    }
}

fn disconnected_set() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (p, _) = load_problem(data_path("disconnected.json")).unwrap();
    let comps = enumerate_robust_components(&p, 12).unwrap();
    let mut points: Vec<Vec<f64>> = comps.iter().filter(|c| c.is_point(1e-9)).map(|c| c.witness.clone()).collect();
    points.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let expected = [vec![1., 0., 0.], vec![0., 1., 0.]];
    let same = comps.len() == 2
        && points.len() == 2
        && points.iter().zip(&expected).all(|(a, b)| a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-9));
    if !same {
        failures.push(format!("components {comps:?}"));
    }
    for x in &expected {
        let v = check_optimality_exact(&p, &eq_point(x), &opts()).unwrap();
        if v.optimal != Optimality::Yes {
            failures.push(format!("{x:?} not robust optimal"));
        }
    }
    for (x, c3) in [([0., 0., 1.], 1.5), ([0.5, 0.5, 0.], 0.5)] {
        let v = check_optimality_exact(&p, &eq_point(&x), &opts()).unwrap();
        let cert = v.certificate.as_ref();
        let witness_c3 = cert.and_then(|c| c.realization.as_ref()).map(|r| r.cost_x[2]);
        let verified = cert.is_some_and(|c| c.verify(&p, &eq_point(&x), 1e-7) && c.witness.is_some());
        if v.optimal != Optimality::No || witness_c3 != Some(c3) || !verified {
            failures.push(format!("{x:?}: {:?} with c3 = {witness_c3:?}", v.optimal));
        }
    }
    within(start.elapsed(), Duration::from_secs(1), &mut failures);
    summarize(failures, "two isolated points; both refutations carry the expected c3".into())
}

fn transportation() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (p, _) = load_problem(data_path("transportation.json")).unwrap();
    let mid_opt = eq_point(&[0., 0., 100., 150., 10., 0., 0., 200., 50.]);
    if !check_feasibility_eq(&p, &mid_opt) {
        failures.push("midpoint optimum not robust feasible".into());
    }
    if check_optimality_exact(&p, &mid_opt, &opts()).unwrap().optimal != Optimality::No {
        failures.push("midpoint optimum not refuted".into());
    }
    let cand = find_candidate_eq(&p).unwrap().unwrap();
    let obj = midpoint_objective(&p, &cand);
    if (obj - 5040.0).abs() > 1e-6 {
        failures.push(format!("candidate objective {obj}"));
    }
    let v = check_optimality_exact(&p, &cand, &opts()).unwrap();
    if v.optimal != Optimality::Yes || v.systems_checked != 16 {
        failures.push(format!("exact check {:?} after {} systems", v.optimal, v.systems_checked));
    }
    let full = check_sufficient(&p, &cand, &opts()).unwrap().optimal;
    if full != Optimality::Unknown {
        failures.push(format!("sufficient condition on full data gives {full:?}, expected Unknown"));
    }
    let reduced = samples::transport_3x3(&[(1, 2), (2, 0)]);
    let cand = find_candidate_eq(&reduced).unwrap().unwrap();
    let r = check_sufficient(&reduced, &cand, &opts()).unwrap().optimal;
    if r != Optimality::Yes {
        failures.push(format!("sufficient condition with edge (2,2) certain gives {r:?}"));
    }
    within(start.elapsed(), Duration::from_secs(5), &mut failures);
    summarize(failures, format!("objective {obj}, 16 systems"))
}

fn diet() -> Outcome {
    let mut failures = Vec::new();
    let p = load_diet(data_path("diet.json"), &DietOptions::default()).unwrap();
    let cand = find_candidate(&p).unwrap().unwrap();
    let exact = check_optimality_exact(&p, &cand, &opts()).unwrap();
    if exact.optimal != Optimality::Yes {
        failures.push(format!("exact check {:?}", exact.optimal));
    }
    let suff = check_sufficient(&p, &cand, &opts()).unwrap().optimal;
    if suff != Optimality::Unknown {
        failures.push(format!("sufficient condition {suff:?}"));
    }
    summarize(failures, format!("exact Yes after {} systems, sufficient Unknown", exact.systems_checked))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut failures = Vec::new();
    let (mut feasible, mut robust) = (0, 0);
    for t in 0..500 {
        let n = r.random_range(2..=6);
        let m = r.random_range(1..=3);
        let (p, pt) = random_equality(&mut r, n, m, 10);
        let oracle = oracle_robust_optimal(&p, &pt, 0).unwrap();
        let feas = check_feasibility_eq(&p, &pt);
        let exact = check_optimality_exact(&p, &pt, &opts()).unwrap();
        feasible += oracle.feasible as usize;
        robust += (oracle.optimal == Optimality::Yes) as usize;
        if feas != oracle.feasible || exact.feasible != oracle.feasible || exact.optimal != oracle.optimal {
            failures.push(format!("instance {t}: oracle {:?}, exact {:?}", oracle.optimal, exact.optimal));
        }
    }
    within(start.elapsed(), Duration::from_secs(120), &mut failures);
    summarize(failures, format!("500 instances agree ({feasible} feasible, {robust} robust optimal)"))
}

fn sufficient_soundness() -> Outcome {
    let mut r = rng(5);
    let mut failures = Vec::new();
    let (mut cases, mut attempts) = (0, 0);
    while cases < 500 && attempts < 50_000 {
        attempts += 1;
        let p = match attempts % 3 {
            0 => {
                let dims = (r.random_range(2..=5), r.random_range(0..=2));
                let rows = (r.random_range(1..=3), r.random_range(0..=2));
                random_general(&mut r, dims, rows, 6).0
            }
            1 => {
                let (n, m) = (r.random_range(2..=6), r.random_range(1..=3));
                random_equality(&mut r, n, m, 6).0
            }
            _ => transport_instance(&mut r),
        };
        let Some(pt) = find_candidate(&p).ok().flatten() else { continue };
        let nd = sufficient_nondegenerate(&p, &pt);
        let dg = sufficient_degenerate(&p, &pt);
        if nd != Optimality::Yes && dg != Optimality::Yes {
            continue;
        }
        let exact = check_optimality_exact(&p, &pt, &CheckOptions { budget: 1 << 12, ..opts() });
        let Ok(exact) = exact else { continue };
        cases += 1;
        if exact.optimal != Optimality::Yes {
            failures.push(format!("attempt {attempts}: sufficient {nd:?}/{dg:?}, exact {:?}", exact.optimal));
        }
    }
    if cases < 500 {
        failures.push(format!("only {cases} sufficient Yes cases in {attempts} attempts"));
    }
    summarize(failures, format!("{cases} sufficient Yes cases, all confirmed by the exact check"))
}

/// Small transportation instance with uncertain costs and one or two
/// uncertain edges.
fn transport_instance(r: &mut impl Rng) -> IntervalLP {
    let (m, n) = (r.random_range(2..=3), r.random_range(2..=4));
    let proto = robust_ilp::bench::Protocol::default();
    let edges = r.random_range(0..=2);
    robust_ilp::bench::random_transportation(r, m, n, edges, &proto)
}

fn table_trend() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let table = run_table1(&[BenchConfig { m: 5, n: 10, edges: vec![2, 4, 6] }], 500, 1);
    let rates: Vec<f64> = table.rows.iter().map(|r| r.success_rate_pct).collect();
    let target = [25.66, 10.63, 4.89];
    if !rates.windows(2).all(|w| w[0] > w[1]) {
        failures.push(format!("rates {rates:?} not strictly decreasing"));
    }
    for (got, want) in rates.iter().zip(target) {
        if (got - want).abs() > 10.0 {
            failures.push(format!("rate {got:.2} more than 10 points from {want}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(600), &mut failures);
    let shown: Vec<String> = rates.iter().map(|r| format!("{r:.2}")).collect();
    summarize(failures, format!("success rates {} over 500 trials", shown.join(" / ")))
}

fn zero_radius() -> Outcome {
    let mut r = rng(7);
    let mut failures = Vec::new();
    let mut optimal = 0;
    for t in 0..200 {
        let (p, pt) = if t % 2 == 0 {
            let (n, m) = (r.random_range(2..=6), r.random_range(1..=3));
            let (p, pt) = random_point_lp(&mut r, n, m);
            let pt = if r.random_bool(0.5) { find_candidate(&p).ok().flatten().unwrap_or(pt) } else { pt };
            (p, pt)
        } else {
            let dims = (r.random_range(2..=4), r.random_range(0..=2));
            let rows = (r.random_range(1..=2), r.random_range(0..=2));
            let (p, pt) = random_general(&mut r, dims, rows, 0);
            let p = p.midpoint();
            let pt = if r.random_bool(0.5) { find_candidate(&p).ok().flatten().unwrap_or(pt) } else { pt };
            (p, pt)
        };
        let classical = check_feasibility(&p, &pt, 1e-9) && kkt_optimal(&p, &pt, 1e-9);
        let v = check_optimality_exact(&p, &pt, &opts()).unwrap();
        optimal += classical as usize;
        if (v.optimal == Optimality::Yes) != classical {
            failures.push(format!("instance {t}: robust {:?}, classical optimal {classical}", v.optimal));
        }
    }
    summarize(failures, format!("200 point LPs agree ({optimal} optimal)"))
}

fn random_interval(r: &mut impl Rng) -> Interval {
    let mid = r.random_range(-5.0..5.0);
    let rad = if r.random_bool(0.2) { 0.0 } else { r.random_range(0.0..2.0) };
    Interval::from_mid_rad(mid, rad).unwrap()
}

fn pick(r: &mut impl Rng, iv: &Interval) -> f64 {
    match r.random_range(0..3) {
        0 => iv.lo(),
        1 => iv.hi(),
        _ => r.random_range(iv.lo()..=iv.hi()),
    }
}

fn containment() -> Outcome {
    let mut r = rng(8);
    let mut failures = Vec::new();
    let mut product_checks = 0;
    for t in 0..1000 {
        let (rows, cols) = (r.random_range(1..=4), r.random_range(1..=4));
        let m = IntervalMatrix::from_fn(rows, cols, |_, _| random_interval(&mut r));
        let v: IntervalVector = (0..cols).map(|_| random_interval(&mut r)).collect();
        let x: Vec<f64> = (0..cols).map(|_| r.random_range(-3.0..3.0)).collect();
        let mp = DMatrix::from_fn(rows, cols, |i, j| pick(&mut r, &m.row(i)[j]));
        let vp = DVector::from_iterator(cols, v.iter().map(|iv| pick(&mut r, iv)));
        let prod = imatmul_iv(&m, &v).unwrap();
        let matvec = imatvec(&m, &x).unwrap();
        let ok = prod.contains_point((&mp * &vp).as_slice())
            && matvec.contains_point((&mp * DVector::from_column_slice(&x)).as_slice());
        product_checks += 1;
        if !ok {
            failures.push(format!("product {t}"));
        }
    }
    let mut vertex_checks = 0;
    while vertex_checks < 1000 {
        let n = r.random_range(1..=3);
        let m = IntervalMatrix::from_fn(n, n, |i, j| {
            let mid = if i == j { r.random_range(3.0..6.0) } else { r.random_range(-1.0..1.0) };
            Interval::from_mid_rad(mid, r.random_range(0.0..0.3)).unwrap()
        });
        let rhs: IntervalVector = (0..n).map(|_| random_interval(&mut r)).collect();
        let Ok(enc) = enclose_square(&m, &rhs) else { continue };
        let slots = n * n + n;
        for code in 0..(1u32 << slots) {
            let bit = |k: usize| code >> k & 1 == 1;
            let mp = DMatrix::from_fn(n, n, |i, j| m.row(i)[j].bound(bit(i * n + j)));
            let rp = DVector::from_fn(n, |i, _| rhs.as_slice()[i].bound(bit(n * n + i)));
            let Some(sol) = mp.lu().solve(&rp) else { continue };
            vertex_checks += 1;
            if !enc.bounds.inflate(1e-9).contains_point(sol.as_slice()) {
                failures.push(format!("vertex solution {sol:?} outside {:?}", enc.bounds));
            }
        }
    }
    summarize(failures, format!("{product_checks} product and {vertex_checks} enclosure vertex checks"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("disconnected robust set", disconnected_set),
        ("transportation example", transportation),
        ("diet example", diet),
        ("oracle equivalence", oracle_equivalence),
        ("sufficient-condition soundness", sufficient_soundness),
        ("success-rate trend", table_trend),
        ("zero-radius reduction", zero_radius),
        ("interval containment", containment),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| outcome(false, format!("panicked: {:?}", e.downcast_ref::<String>())));
        failed += !result.ok as usize;
        let tag = if result.ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name}: {} [{:.2?}]", i + 1, result.detail, start.elapsed());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
