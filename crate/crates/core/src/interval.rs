//! Closed real intervals, interval vectors and interval matrices.
//!
//! Storage is always the bound pair `(lo, hi)`; midpoint and radius are
//! computed views. Arithmetic uses plain round-to-nearest floating point:
//! no directed rounding is attempted, and callers that want a safety margin
//! apply [`Interval::inflate`] explicitly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("invalid interval: lower bound {lo} exceeds upper bound {hi}")]
    Inverted { lo: f64, hi: f64 },
    #[error("interval bounds must be finite, got [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A closed interval `[lo, hi]` with finite bounds.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[v, v]`.
    pub const fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn from_mid_rad(mid: f64, rad: f64) -> Result<Self, IntervalError> {
        Self::new(mid - rad.abs(), mid + rad.abs())
    }

    /// `[v·(1−rel), v·(1+rel)]`, ordered so that negative `v` works too.
    pub fn relative(v: f64, rel: f64) -> Self {
        let a = v * (1.0 - rel);
        let b = v * (1.0 + rel);
        Self { lo: a.min(b), hi: a.max(b) }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Largest absolute value in the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` lies strictly inside `self`.
    pub fn interior_contains(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Product with a real scalar (two-endpoint rule).
    #[inline]
    pub fn scale(&self, x: f64) -> Interval {
        let a = self.lo * x;
        let b = self.hi * x;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Widens both bounds by `eps` times the magnitude. `eps = 0` is a no-op.
    pub fn inflate(&self, eps: f64) -> Interval {
        if eps == 0.0 {
            return *self;
        }
        let d = eps * self.mag();
        Interval { lo: self.lo - d, hi: self.hi + d }
    }

    /// Extreme value selected by `upper`.
    #[inline]
    pub fn bound(&self, upper: bool) -> f64 {
        if upper {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = IntervalError;
    fn try_from((lo, hi): (f64, f64)) -> Result<Self, Self::Error> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.lo, iv.hi)
    }
}

impl From<f64> for Interval {
    fn from(v: f64) -> Self {
        Interval::point(v)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo - rhs.hi, hi: self.hi - rhs.lo }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    /// Four-product min/max rule.
    fn mul(self, rhs: Interval) -> Interval {
        let p = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: f64) -> Interval {
        self.scale(rhs)
    }
}

/// A column of intervals.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        Self(entries)
    }

    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self, IntervalError> {
        if lo.len() != hi.len() {
            return Err(IntervalError::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        lo.iter().zip(hi).map(|(&l, &h)| Interval::new(l, h)).collect::<Result<Vec<_>, _>>().map(Self)
    }

    pub fn points(v: &[f64]) -> Self {
        Self(v.iter().copied().map(Interval::point).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Interval::point(0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn lo(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::lo))
    }

    pub fn hi(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::hi))
    }

    pub fn mid(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::mid))
    }

    pub fn rad(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::rad))
    }

    /// Entrywise magnitude `max(|lo|, |hi|)`.
    pub fn mag(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::mag))
    }

    pub fn select(&self, idx: &[usize]) -> IntervalVector {
        Self(idx.iter().map(|&i| self.0[i]).collect())
    }

    pub fn concat(&self, other: &IntervalVector) -> IntervalVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn inflate(&self, eps: f64) -> IntervalVector {
        Self(self.0.iter().map(|x| x.inflate(eps)).collect())
    }

    pub fn contains_point(&self, v: &[f64]) -> bool {
        v.len() == self.len() && self.0.iter().zip(v).all(|(iv, &x)| iv.contains(x))
    }

    pub fn contains(&self, other: &IntervalVector) -> bool {
        other.len() == self.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.contains_interval(b))
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(Interval::width).fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl IntoIterator for IntervalVector {
    type Item = Interval;
    type IntoIter = std::vec::IntoIter<Interval>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Dense row-major interval matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Interval>) -> Result<Self, IntervalError> {
        if data.len() != rows * cols {
            return Err(IntervalError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_bounds(lo: &DMatrix<f64>, hi: &DMatrix<f64>) -> Result<Self, IntervalError> {
        if lo.shape() != hi.shape() {
            return Err(IntervalError::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        let mut data = Vec::with_capacity(lo.len());
        for i in 0..lo.nrows() {
            for j in 0..lo.ncols() {
                data.push(Interval::new(lo[(i, j)], hi[(i, j)])?);
            }
        }
        Ok(Self { rows: lo.nrows(), cols: lo.ncols(), data })
    }

    pub fn from_point(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Interval::point(0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| Interval::point(if i == j { 1.0 } else { 0.0 }))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.data
    }

    fn map_real(&self, f: impl Fn(&Interval) -> f64) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    pub fn lo(&self) -> DMatrix<f64> {
        self.map_real(Interval::lo)
    }

    pub fn hi(&self) -> DMatrix<f64> {
        self.map_real(Interval::hi)
    }

    pub fn mid(&self) -> DMatrix<f64> {
        self.map_real(Interval::mid)
    }

    pub fn rad(&self) -> DMatrix<f64> {
        self.map_real(Interval::rad)
    }

    pub fn mag(&self) -> DMatrix<f64> {
        self.map_real(Interval::mag)
    }

    pub fn is_point(&self) -> bool {
        self.data.iter().all(Interval::is_point)
    }

    pub fn transpose(&self) -> IntervalMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntervalMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntervalMatrix {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)])
    }

    /// `(self | other)`.
    pub fn hstack(&self, other: &IntervalMatrix) -> Result<IntervalMatrix, IntervalError> {
        if self.rows != other.rows {
            return Err(IntervalError::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let c = self.cols;
        Ok(Self::from_fn(self.rows, c + other.cols, |i, j| if j < c { self[(i, j)] } else { other[(i, j - c)] }))
    }

    /// `(self; other)`.
    pub fn vstack(&self, other: &IntervalMatrix) -> Result<IntervalMatrix, IntervalError> {
        if self.cols != other.cols {
            return Err(IntervalError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> IntervalMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -*x).collect() }
    }

    /// Interval matrix times real vector; exact two-endpoint rule per entry.
    pub fn mul_vec(&self, x: &[f64]) -> Result<IntervalVector, IntervalError> {
        if x.len() != self.cols {
            return Err(IntervalError::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(Interval::point(0.0), |acc, (a, &xj)| acc + a.scale(xj))
            })
            .collect())
    }

    /// Interval matrix times interval vector (four-product rule per entry).
    pub fn mul_ivec(&self, v: &IntervalVector) -> Result<IntervalVector, IntervalError> {
        if v.len() != self.cols {
            return Err(IntervalError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).fold(Interval::point(0.0), |acc, (a, b)| acc + *a * *b))
            .collect())
    }

    /// Real matrix times interval matrix, `P·self`.
    pub fn premul_real(&self, p: &DMatrix<f64>) -> Result<IntervalMatrix, IntervalError> {
        if p.ncols() != self.rows {
            return Err(IntervalError::DimensionMismatch { expected: self.rows, found: p.ncols() });
        }
        Ok(Self::from_fn(p.nrows(), self.cols, |i, j| {
            (0..self.rows).fold(Interval::point(0.0), |acc, k| acc + self[(k, j)].scale(p[(i, k)]))
        }))
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Real matrix times interval vector, `P·v`.
pub fn real_mul_ivec(p: &DMatrix<f64>, v: &IntervalVector) -> Result<IntervalVector, IntervalError> {
    if p.ncols() != v.len() {
        return Err(IntervalError::DimensionMismatch { expected: p.ncols(), found: v.len() });
    }
    Ok((0..p.nrows())
        .map(|i| v.iter().enumerate().fold(Interval::point(0.0), |acc, (k, x)| acc + x.scale(p[(i, k)])))
        .collect())
}

/// Elementwise midpoint matrix.
pub fn mid(m: &IntervalMatrix) -> DMatrix<f64> {
    m.mid()
}

/// Elementwise radius matrix.
pub fn rad(m: &IntervalMatrix) -> DMatrix<f64> {
    m.rad()
}

pub fn imatvec(m: &IntervalMatrix, x: &[f64]) -> Result<IntervalVector, IntervalError> {
    m.mul_vec(x)
}

pub fn imatmul_iv(m: &IntervalMatrix, v: &IntervalVector) -> Result<IntervalVector, IntervalError> {
    m.mul_ivec(v)
}

/// A vector with entries in `{+1, −1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Option<Self> {
        entries.iter().all(|&s| s == 1 || s == -1).then_some(Self(entries))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// The `index`-th sign vector in reflected Gray-code order; bit `j` of the
    /// code set means `s_j = −1`. Index 0 is all `+1`, and consecutive
    /// indices differ in exactly one entry.
    pub fn gray(index: u64, len: usize) -> Self {
        let code = index ^ (index >> 1);
        Self((0..len).map(|j| if (code >> j) & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize) -> f64 {
        f64::from(self.0[j])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// `diag(s)·v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().zip(v).map(|(&s, &x)| f64::from(s) * x).collect()
    }
}

/// Entrywise sign with `sgn(0) = +1`.
pub fn sgn(v: &[f64]) -> SignVector {
    SignVector(v.iter().map(|&x| if x >= 0.0 { 1 } else { -1 }).collect())
}

/// Entrywise absolute value.
pub fn magnitude(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.abs()).collect()
}
