use std::collections::BTreeSet;

use crate::interval::{Interval, IntervalMatrix, IntervalVector};

use super::{dim_err, IntervalLP, ModelError};

/// Transportation problem with `m` suppliers and `n` demanders.
///
/// Variable `x_ij` sits at column `i*n + j`. Rows `0..m` balance the
/// suppliers, rows `m..m+n` the demanders. Listed edges get the coefficient
/// `[0,1]` in both of their rows; all others have `1`. Edges are 0-based.
pub fn build_transportation(
    costs: &IntervalMatrix,
    supplies: &IntervalVector,
    demands: &IntervalVector,
    uncertain_edges: &[(usize, usize)],
) -> Result<IntervalLP, ModelError> {
    let (m, n) = costs.shape();
    if supplies.len() != m {
        return Err(dim_err("supplies", m, supplies.len()));
    }
    if demands.len() != n {
        return Err(dim_err("demands", n, demands.len()));
    }
    let mut edges = BTreeSet::new();
    for &(i, j) in uncertain_edges {
        if i >= m || j >= n {
            return Err(ModelError::EdgeOutOfRange(i, j));
        }
        edges.insert((i, j));
    }
    let unit = Interval::point(1.0);
    let edge = Interval::new(0.0, 1.0).expect("valid interval");
    let mut a = IntervalMatrix::zeros(m + n, m * n);
    for i in 0..m {
        for j in 0..n {
            let coef = if edges.contains(&(i, j)) { edge } else { unit };
            a[(i, i * n + j)] = coef;
            a[(m + j, i * n + j)] = coef;
        }
    }
    let rhs = supplies.concat(demands);
    let c: IntervalVector = costs.entries().iter().copied().collect();
    IntervalLP::equality(a, rhs, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_incidence_without_uncertain_edges() {
        let c = IntervalMatrix::from_point(&nalgebra::DMatrix::from_row_slice(2, 3, &[1., 2., 3., 4., 5., 6.]));
        let p = build_transportation(&c, &IntervalVector::points(&[3., 3.]), &IntervalVector::points(&[2., 2., 2.]), &[])
            .unwrap();
        assert_eq!((p.m(), p.n()), (5, 6));
        let a = p.eq_x().mid();
        for col in 0..6 {
            assert_eq!(a.column(col).iter().filter(|v| **v != 0.0).count(), 2);
            assert_eq!(a.column(col).sum(), 2.0);
        }
        assert_eq!(p.cost_x().mid().as_slice(), &[1., 2., 3., 4., 5., 6.]);
    }

    #[test]
    fn single_edge() {
        let c = IntervalMatrix::from_point(&nalgebra::DMatrix::from_element(1, 1, 7.0));
        let p = build_transportation(&c, &IntervalVector::points(&[1.]), &IntervalVector::points(&[1.]), &[(0, 0)])
            .unwrap();
        assert_eq!(p.eq_x().shape(), (2, 1));
        assert_eq!(p.eq_x()[(0, 0)], Interval::new(0.0, 1.0).unwrap());
        assert_eq!(p.eq_x()[(1, 0)], Interval::new(0.0, 1.0).unwrap());
    }

    #[test]
    fn edge_out_of_range() {
        let c = IntervalMatrix::zeros(2, 2);
        let v = IntervalVector::zeros(2);
        assert_eq!(build_transportation(&c, &v, &v, &[(2, 0)]), Err(ModelError::EdgeOutOfRange(2, 0)));
    }
}
