//! Random transportation experiments: how often the candidate heuristic
//! followed by the sufficient conditions certifies a robust optimum.
//!
//! Instances: supplies are uniform integers in `[50, 300]`; demands split
//! the total supply by uniform random weights (the last demand absorbs
//! rounding); costs are uniform integers in `[1, 100]`. A tenth of the cost
//! entries get 10% relative radius, supplies and demands get 10%
//! tolerance, and the requested number of distinct edges get coefficient
//! `[0, 1]`.

use std::fmt::Write as _;
use std::time::Duration;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::candidate::find_candidate_eq;
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::model::{build_transportation, IntervalLP};
use crate::robust::{check_sufficient, CheckOptions, Optimality};
use crate::timing::Stopwatch;

/// One table block: dimensions and the edge counts to try.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub m: usize,
    pub n: usize,
    pub edges: Vec<usize>,
}

/// Uncertainty levels of the generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    /// Fraction of cost entries that are uncertain.
    pub cost_fraction: f64,
    pub cost_rel: f64,
    pub rhs_rel: f64,
    /// Costs are drawn uniformly from these integers (inclusive).
    pub cost_range: (u32, u32),
}

impl Default for Protocol {
    fn default() -> Self {
        Self { cost_fraction: 0.1, cost_rel: 0.1, rhs_rel: 0.1, cost_range: (1, 100) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub m: usize,
    pub n: usize,
    pub edges: usize,
    /// Mean seconds per trial.
    pub candidate_time_s: f64,
    pub robust_time_s: f64,
    pub success_rate_pct: f64,
    pub trials: usize,
    pub seed: u64,
    pub candidates_found: usize,
    pub successes: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
}

impl StatsTable {
    /// CSV with a header line. With `timing == false` the time columns are
    /// written as zero so that output depends only on the seed.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("m,n,edges,candidate_time_s,robust_time_s,success_rate_pct,trials,seed\n");
        for r in &self.rows {
            let (ct, rt) = if timing { (r.candidate_time_s, r.robust_time_s) } else { (0.0, 0.0) };
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{:.2},{},{}",
                r.m, r.n, r.edges, ct, rt, r.success_rate_pct, r.trials, r.seed
            );
        }
        out
    }
}

/// Deterministic RNG for trial `trial` of table row `row`.
pub fn trial_rng(seed: u64, row: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((row as u64) << 32) | trial as u64);
    rng
}

/// Random balanced transportation instance with `edges` uncertain edges.
pub fn random_transportation(rng: &mut impl Rng, m: usize, n: usize, edges: usize, proto: &Protocol) -> IntervalLP {
    let supplies: Vec<f64> = (0..m).map(|_| rng.random_range(50..=300) as f64).collect();
    let total: f64 = supplies.iter().sum();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let wsum: f64 = weights.iter().sum();
    let mut demands: Vec<f64> = weights[..n - 1].iter().map(|w| (total * w / wsum).round()).collect();
    demands.push(total - demands.iter().sum::<f64>());
    let costs: Vec<f64> = (0..m * n).map(|_| rng.random_range(proto.cost_range.0..=proto.cost_range.1) as f64).collect();
    let n_uncertain = (proto.cost_fraction * (m * n) as f64).round() as usize;
    let mut cost_iv: Vec<Interval> = costs.iter().map(|&c| Interval::point(c)).collect();
    for k in sample(rng, m * n, n_uncertain.min(m * n)) {
        cost_iv[k] = Interval::relative(costs[k], proto.cost_rel);
    }
    let edge_list: Vec<(usize, usize)> =
        sample(rng, m * n, edges.min(m * n)).into_iter().map(|k| (k / n, k % n)).collect();
    let c = IntervalMatrix::from_row_major(m, n, cost_iv).expect("sizes agree");
    let rel = |v: &[f64]| v.iter().map(|&x| Interval::relative(x, proto.rhs_rel)).collect::<IntervalVector>();
    build_transportation(&c, &rel(&supplies), &rel(&demands), &edge_list).expect("edges in range")
}

struct Trial {
    candidate: Duration,
    robust: Duration,
    found: bool,
    success: bool,
}

fn run_trial(p: &IntervalLP, opts: &CheckOptions) -> Trial {
    let clock = Stopwatch::start();
    let cand = find_candidate_eq(p).ok().flatten();
    let candidate = clock.elapsed();
    let clock = Stopwatch::start();
    let success = cand
        .as_ref()
        .and_then(|pt| check_sufficient(p, pt, opts).ok())
        .is_some_and(|v| v.optimal == Optimality::Yes);
    Trial { candidate, robust: clock.elapsed(), found: cand.is_some(), success }
}

pub fn run_table1(configs: &[BenchConfig], trials: usize, seed: u64) -> StatsTable {
    run_table1_with(configs, trials, seed, &Protocol::default(), true)
}

pub fn run_table1_with(configs: &[BenchConfig], trials: usize, seed: u64, proto: &Protocol, parallel: bool) -> StatsTable {
    let trials = trials.max(1);
    let opts = CheckOptions { parallel: false, ..Default::default() };
    let mut rows = Vec::new();
    let mut row_index = 0;
    for cfg in configs {
        for &edges in &cfg.edges {
            let row = row_index;
            row_index += 1;
            let one = |t: usize| {
                let mut rng = trial_rng(seed, row, t);
                let p = random_transportation(&mut rng, cfg.m, cfg.n, edges, proto);
                run_trial(&p, &opts)
            };
            let results = collect(trials, parallel, &one);
            let k = trials as f64;
            let successes = results.iter().filter(|r| r.success).count();
            rows.push(StatsRow {
                m: cfg.m,
                n: cfg.n,
                edges,
                candidate_time_s: results.iter().map(|r| r.candidate.as_secs_f64()).sum::<f64>() / k,
                robust_time_s: results.iter().map(|r| r.robust.as_secs_f64()).sum::<f64>() / k,
                success_rate_pct: 100.0 * successes as f64 / k,
                trials,
                seed,
                candidates_found: results.iter().filter(|r| r.found).count(),
                successes,
            });
        }
    }
    StatsTable { rows }
}

fn collect(trials: usize, parallel: bool, one: &(dyn Fn(usize) -> Trial + Sync)) -> Vec<Trial> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..trials).into_par_iter().map(one).collect();
    }
    let _ = parallel;
    (0..trials).map(one).collect()
}
