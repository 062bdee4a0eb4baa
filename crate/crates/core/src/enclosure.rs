//! Enclosures of solution sets of square interval linear systems.
//!
//! The solver preconditions with the inverse midpoint `R`, writes every
//! solution as `x̃ + e` with `x̃ = R·mid(r)`, and encloses `e` by the Krawczyk
//! fixed-point relation `e ∈ R(r − M x̃) + (I − R M) e`. The starting box is
//! an a-priori bound weighted by an approximate Perron vector of
//! `|I − R M|`, which exists exactly when the preconditioned system is
//! contracting; the Krawczyk operator is then iterated with intersection.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{real_mul_ivec, Interval, IntervalMatrix, IntervalVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnclosureError {
    #[error("interval system is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("midpoint matrix is singular or too ill-conditioned to invert")]
    MidpointSingular,
    #[error("preconditioned system is not contracting (estimated factor {contraction:.4})")]
    NotStronglyRegular { contraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub bounds: IntervalVector,
    /// The refinement converged before the iteration cap.
    pub tight: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnclosureConfig {
    pub max_iter: usize,
    /// Stop refining once the summed width shrinks by less than this
    /// fraction of `1 + width`.
    pub improvement_tol: f64,
    /// Relative widening applied to the preconditioned residual.
    pub product_inflation: f64,
    /// Give up when `‖R‖·‖mid M‖` exceeds this.
    pub max_condition: f64,
}

impl Default for EnclosureConfig {
    fn default() -> Self {
        Self { max_iter: 50, improvement_tol: 1e-12, product_inflation: 0.0, max_condition: 1e12 }
    }
}

pub fn enclose_square(m: &IntervalMatrix, r: &IntervalVector) -> Result<Enclosure, EnclosureError> {
    enclose_square_with(m, r, &EnclosureConfig::default())
}

pub fn enclose_square_with(
    m: &IntervalMatrix,
    r: &IntervalVector,
    cfg: &EnclosureConfig,
) -> Result<Enclosure, EnclosureError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(EnclosureError::NotSquare { rows, cols });
    }
    if r.len() != rows {
        return Err(EnclosureError::DimensionMismatch { expected: rows, found: r.len() });
    }
    let n = rows;
    if n == 0 {
        return Ok(Enclosure { bounds: IntervalVector::default(), tight: true });
    }

    let mc = m.mid();
    let precond = mc.clone().try_inverse().ok_or(EnclosureError::MidpointSingular)?;
    let cond = precond.amax() * mc.amax() * n as f64;
    if !cond.is_finite() || cond > cfg.max_condition {
        return Err(EnclosureError::MidpointSingular);
    }

    let center = &precond * r.mid();
    let center_s = center.as_slice();
    let image = m.mul_vec(center_s).map_err(dim)?;
    let residual: IntervalVector = r.iter().zip(image.iter()).map(|(a, b)| *a - *b).collect();
    let z = real_mul_ivec(&precond, &residual).map_err(dim)?.inflate(cfg.product_inflation);

    let rm = m.premul_real(&precond).map_err(dim)?;
    let contraction = IntervalMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { Interval::point(1.0) } else { Interval::point(0.0) };
        id - rm[(i, j)]
    });
    let abs_c = contraction.mag();

    let (weights, gamma) = perron_weights(&abs_c);
    if !(gamma < 1.0) {
        return Err(EnclosureError::NotStronglyRegular { contraction: gamma });
    }
    let zeta = z.mag();
    let t = (0..n).map(|i| zeta[i] / ((1.0 - gamma) * weights[i])).fold(0.0, f64::max);
    let mut err: IntervalVector = weights.iter().map(|&w| Interval::from_mid_rad(0.0, t * w).unwrap()).collect();

    let mut tight = false;
    for _ in 0..cfg.max_iter {
        let ce = contraction.mul_ivec(&err).map_err(dim)?;
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let k = z[i] + ce[i];
            // The true error set lies in both boxes; an empty meet is
            // rounding noise around a degenerate component.
            next.push(k.intersect(&err[i]).unwrap_or(err[i]));
        }
        let next = IntervalVector::new(next);
        let before: f64 = err.iter().map(Interval::width).sum();
        let after: f64 = next.iter().map(Interval::width).sum();
        err = next;
        if before - after <= cfg.improvement_tol * (1.0 + before) {
            tight = true;
            break;
        }
    }

    let bounds = err.iter().zip(center_s).map(|(e, &c)| *e + Interval::point(c)).collect();
    Ok(Enclosure { bounds, tight })
}

fn dim(e: crate::interval::IntervalError) -> EnclosureError {
    match e {
        crate::interval::IntervalError::DimensionMismatch { expected, found } => {
            EnclosureError::DimensionMismatch { expected, found }
        }
        _ => EnclosureError::DimensionMismatch { expected: 0, found: 0 },
    }
}

/// Positive vector `v` and factor `γ = max_i (|C|v)_i / v_i`; `γ < 1`
/// certifies `|C| v < v`.
fn perron_weights(abs_c: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let n = abs_c.nrows();
    let mut v = DVector::from_element(n, 1.0);
    for _ in 0..100 {
        let mut w = abs_c * &v;
        let floor = 1e-10 * v.max();
        w.iter_mut().for_each(|x| *x += floor);
        let top = w.max();
        if top <= 0.0 || !top.is_finite() {
            break;
        }
        v = w / top;
    }
    let cv = abs_c * &v;
    let gamma = (0..n).map(|i| cv[i] / v[i]).fold(0.0, f64::max);
    (v, gamma)
}

/// Enclosure for `M_top·u = r_top` (interval) stacked over `M_bot·u = r_bot`
/// (exact). The stacked system must be square.
pub fn enclose_stacked(
    m_top: &IntervalMatrix,
    r_top: &IntervalVector,
    m_bot: &DMatrix<f64>,
    r_bot: &DVector<f64>,
) -> Result<Enclosure, EnclosureError> {
    enclose_stacked_with(m_top, r_top, m_bot, r_bot, &EnclosureConfig::default())
}

pub fn enclose_stacked_with(
    m_top: &IntervalMatrix,
    r_top: &IntervalVector,
    m_bot: &DMatrix<f64>,
    r_bot: &DVector<f64>,
    cfg: &EnclosureConfig,
) -> Result<Enclosure, EnclosureError> {
    if m_bot.nrows() > 0 && m_bot.ncols() != m_top.ncols() {
        return Err(EnclosureError::DimensionMismatch { expected: m_top.ncols(), found: m_bot.ncols() });
    }
    if r_bot.len() != m_bot.nrows() {
        return Err(EnclosureError::DimensionMismatch { expected: m_bot.nrows(), found: r_bot.len() });
    }
    if m_bot.nrows() == 0 {
        return enclose_square_with(m_top, r_top, cfg);
    }
    let m = m_top.vstack(&IntervalMatrix::from_point(m_bot)).map_err(dim)?;
    let r = r_top.concat(&IntervalVector::points(r_bot.as_slice()));
    enclose_square_with(&m, &r, cfg)
}

/// Orthonormal basis of `ker M` as matrix columns, from an SVD with rank
/// tolerance `1e−10·‖M‖₂`. Each column is signed so that its largest entry
/// is positive.
pub fn orthonormal_nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), m.shape()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let top = svd.singular_values.max();
    let tol = 1e-10 * top;
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol {
            let mut v: DVector<f64> = v_t.row(k).transpose();
            let imax = v.iamax();
            if v[imax] < 0.0 {
                v = -v;
            }
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return DMatrix::zeros(cols, 0);
    }
    DMatrix::from_columns(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let r = IntervalVector::points(&[1.0, 1.0, 1.0]);
        let e = enclose_square(&IntervalMatrix::identity(3), &r).unwrap();
        assert_eq!(e.bounds, r);
        let r = IntervalVector::new(vec![iv(-1.0, 2.0), iv(0.5, 0.75)]);
        let e = enclose_square(&IntervalMatrix::identity(2), &r).unwrap();
        assert_eq!(e.bounds, r);
    }

    #[test]
    fn scalar_division() {
        let m = IntervalMatrix::from_row_major(1, 1, vec![iv(2.0, 2.0)]).unwrap();
        let r = IntervalVector::new(vec![iv(2.0, 4.0)]);
        let e = enclose_square(&m, &r).unwrap();
        assert_eq!(e.bounds[0], iv(1.0, 2.0));
    }

    #[test]
    fn two_by_two_contains_vertex_hull() {
        let m = IntervalMatrix::from_row_major(
            2,
            2,
            vec![iv(3.9, 4.1), iv(-0.1, 0.1), iv(-0.1, 0.1), iv(3.9, 4.1)],
        )
        .unwrap();
        let r = IntervalVector::points(&[1.0, 1.0]);
        let e = enclose_square(&m, &r).unwrap();
        // Oracle: hull of the exact solutions of all 2^4 vertex matrices.
        let mut hull = [(f64::INFINITY, f64::NEG_INFINITY); 2];
        for mask in 0..16u32 {
            let pick = |k: usize| m.entries()[k].bound(mask >> k & 1 == 1);
            let (a, b, c, d) = (pick(0), pick(1), pick(2), pick(3));
            let det = a * d - b * c;
            let x = [(d - b) / det, (a - c) / det];
            for i in 0..2 {
                hull[i].0 = hull[i].0.min(x[i]);
                hull[i].1 = hull[i].1.max(x[i]);
                assert!(e.bounds[i].contains(x[i]));
            }
        }
        assert!(e.bounds.contains_point(&[0.25, 0.25]));
        assert!(e.bounds.max_width() <= 0.05, "width {}", e.bounds.max_width());
    }

    #[test]
    fn singular_midpoint_and_non_contracting() {
        let m = IntervalMatrix::from_row_major(2, 2, vec![iv(1.0, 1.0); 4]).unwrap();
        let r = IntervalVector::points(&[1.0, 1.0]);
        assert_eq!(enclose_square(&m, &r), Err(EnclosureError::MidpointSingular));

        let m = IntervalMatrix::from_row_major(1, 1, vec![iv(-1.0, 3.0)]).unwrap();
        let r = IntervalVector::points(&[1.0]);
        assert!(matches!(enclose_square(&m, &r), Err(EnclosureError::NotStronglyRegular { .. })));

        let m = IntervalMatrix::zeros(2, 3);
        assert!(matches!(enclose_square(&m, &r), Err(EnclosureError::NotSquare { .. })));
    }

    #[test]
    fn nullspace_examples() {
        let n = orthonormal_nullspace(&DMatrix::identity(2, 2));
        assert_eq!(n.ncols(), 0);
        let n = orthonormal_nullspace(&DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
        assert_eq!(n.shape(), (2, 1));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((n[(0, 0)].abs() - s).abs() < 1e-12 && (n[(0, 0)] + n[(1, 0)]).abs() < 1e-12);
    }

    #[test]
    fn nullspace_of_rank_three_product() {
        let l = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 1.0, 3.0, 0.0, -1.0, 0.5, 1.5]);
        let r = DMatrix::from_row_slice(3, 5, &[1.0, 2.0, 0.0, -1.0, 3.0, 0.0, 1.0, 1.0, 2.0, -2.0, 1.0, 0.0, 4.0, 0.0, 1.0]);
        let m = &l * &r;
        let b = orthonormal_nullspace(&m);
        assert_eq!(b.ncols(), 2);
        assert!((&m * &b).amax() < 1e-10);
        assert!((b.transpose() * &b - DMatrix::<f64>::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn stacked_reduces_to_square_and_completes_rank() {
        let m = IntervalMatrix::from_row_major(2, 2, vec![iv(2.0, 2.1), iv(0.0, 0.1), iv(0.0, 0.0), iv(1.0, 1.0)]).unwrap();
        let r = IntervalVector::new(vec![iv(1.0, 1.1), iv(2.0, 2.0)]);
        let a = enclose_square(&m, &r).unwrap();
        let b = enclose_stacked(&m, &r, &DMatrix::zeros(0, 2), &DVector::zeros(0)).unwrap();
        assert_eq!(a, b);

        // rank-one point top row completed by an exact bottom row
        let top = IntervalMatrix::from_row_major(1, 2, vec![iv(1.0, 1.0), iv(1.0, 1.0)]).unwrap();
        let e = enclose_stacked(
            &top,
            &IntervalVector::points(&[2.0]),
            &DMatrix::from_row_slice(1, 2, &[1.0, -1.0]),
            &DVector::from_vec(vec![0.0]),
        )
        .unwrap();
        assert!(e.bounds.max_width() < 1e-14);
        assert!((e.bounds[0].mid() - 1.0).abs() < 1e-14 && (e.bounds[1].mid() - 1.0).abs() < 1e-14);
    }
}
