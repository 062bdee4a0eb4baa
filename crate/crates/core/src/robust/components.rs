use serde::{Deserialize, Serialize};

use crate::candidate::RobustFeasibleLP;
use crate::linprog::{lp_feasible_with, lp_solve_with, LinearSystem, LpStatus, Sense};
use crate::model::{ActiveSets, IntervalLP};

use super::exact::scan;
use super::{CheckOptions, Reduced, RobustError};

/// One convex piece `{x ∈ 𝓕 : x_i = 0, i ∈ I}` of the robust optimal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustComponent {
    /// Coordinates that vanish on the whole piece.
    pub zero_set: Vec<usize>,
    pub lower: Vec<f64>,
    /// `+∞` where the piece is unbounded.
    pub upper: Vec<f64>,
    /// A point of the piece (average of the extreme points found).
    pub witness: Vec<f64>,
}

impl RobustComponent {
    pub fn is_point(&self, tol: f64) -> bool {
        self.lower.iter().zip(&self.upper).all(|(l, u)| u - l <= tol * (1.0 + l.abs()))
    }

    /// Linear description of the piece.
    pub fn system(&self, p: &IntervalLP) -> LinearSystem {
        RobustFeasibleLP::new(p).with_zeros(&self.zero_set).system
    }
}

fn mask_to_set(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn enumerate_robust_components(p: &IntervalLP, max_n: usize) -> Result<Vec<RobustComponent>, RobustError> {
    enumerate_robust_components_with(p, max_n, &CheckOptions::default())
}

/// Pieces of the robust optimal set of an equality-form problem, one per
/// inclusion-maximal piece. Uses that the criterion is upward closed in
/// the zero set `I` and that the pieces shrink as `I` grows.
pub fn enumerate_robust_components_with(
    p: &IntervalLP,
    max_n: usize,
    opts: &CheckOptions,
) -> Result<Vec<RobustComponent>, RobustError> {
    if !p.is_equality_form() {
        return Err(RobustError::NotEqualityForm);
    }
    let n = p.n();
    if n > max_n || n > 24 {
        return Err(RobustError::TooLarge { n, max: max_n.min(24) });
    }
    let full = 1u32 << n;
    let base = RobustFeasibleLP::new(p);

    // nonempty[I]: the face {x_I = 0} of 𝓕 is nonempty; downward closed
    let mut nonempty = vec![false; full as usize];
    let mut by_size: Vec<u32> = (0..full).collect();
    by_size.sort_by_key(|m| (m.count_ones(), *m));
    for &mask in &by_size {
        let subsets_ok = (0..n).filter(|&i| mask >> i & 1 == 1).all(|i| nonempty[(mask ^ (1 << i)) as usize]);
        if subsets_ok {
            let sys = base.clone().with_zeros(&mask_to_set(mask, n)).system;
            nonempty[mask as usize] = lp_feasible_with(&sys, &opts.lp)?.is_feasible();
        }
    }

    // passes[I] for nonempty I, largest first; a failing superset settles it
    let mut passes: Vec<Option<bool>> = vec![None; full as usize];
    for &mask in by_size.iter().rev() {
        if !nonempty[mask as usize] {
            continue;
        }
        let superset_fails =
            (0..n).filter(|&i| mask >> i & 1 == 0).any(|i| passes[(mask | (1 << i)) as usize] == Some(false));
        let ok = if superset_fails {
            false
        } else {
            let sets = ActiveSets::from_zero_set(n, &mask_to_set(mask, n));
            scan(&Reduced::new(p, &sets), opts)?.counterexample.is_none()
        };
        passes[mask as usize] = Some(ok);
    }

    let minimal: Vec<u32> = by_size
        .iter()
        .copied()
        .filter(|&mask| {
            passes[mask as usize] == Some(true)
                && (0..n).filter(|&i| mask >> i & 1 == 1).all(|i| passes[(mask ^ (1 << i)) as usize] != Some(true))
        })
        .collect();

    let mut pieces: Vec<RobustComponent> = Vec::new();
    for mask in minimal {
        let piece = describe(p, &base, &mask_to_set(mask, n), opts)?;
        if !pieces.iter().any(|q| q.zero_set == piece.zero_set) {
            pieces.push(piece);
        }
    }
    // drop pieces contained in another one (a larger zero set)
    let keep: Vec<bool> = pieces
        .iter()
        .map(|a| !pieces.iter().any(|b| b.zero_set.len() < a.zero_set.len() && b.zero_set.iter().all(|i| a.zero_set.contains(i))))
        .collect();
    Ok(pieces.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect())
}

fn describe(p: &IntervalLP, base: &RobustFeasibleLP, zero: &[usize], opts: &CheckOptions) -> Result<RobustComponent, RobustError> {
    let n = p.n();
    let sys = base.clone().with_zeros(zero).system;
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut points: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        let mut obj = vec![0.0; n];
        obj[j] = 1.0;
        for (sense, out) in [(Sense::Minimize, &mut lower), (Sense::Maximize, &mut upper)] {
            let res = lp_solve_with(&obj, &sys, sense, &opts.lp)?;
            match res.status {
                LpStatus::Unbounded => out[j] = f64::INFINITY,
                _ => {
                    out[j] = res.objective.unwrap_or(f64::NAN);
                    points.extend(res.point);
                }
            }
        }
    }
    let scale = 1.0 + upper.iter().filter(|u| u.is_finite()).fold(0.0_f64, |a, u| a.max(u.abs()));
    let zero_set: Vec<usize> = (0..n).filter(|&j| upper[j] <= opts.zero_tol * scale).collect();
    for &j in &zero_set {
        lower[j] = 0.0;
        upper[j] = 0.0;
    }
    let k = points.len().max(1) as f64;
    let mut witness: Vec<f64> = (0..n).map(|j| points.iter().map(|q| q[j]).sum::<f64>() / k).collect();
    for &j in &zero_set {
        witness[j] = 0.0;
    }
    Ok(RobustComponent { zero_set, lower, upper, witness })
}
