//! Small built-in instances used by tests, the CLI and the browser demo.

use nalgebra::DMatrix;

use crate::interval::{Interval, IntervalMatrix, IntervalVector};

use super::{build_transportation, IntervalLP};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("valid interval")
}

/// `min x1 + x2 + c3 x3` over `x1 + x2 + x3 = 1, x1 − x2 = b2, x ≥ 0`
/// with `c3 ∈ [0.5, 1.5]` and `b2 ∈ [−1, 1]`. Its robust solutions form
/// two isolated points.
pub fn triangle() -> IntervalLP {
    triangle_with(iv(0.5, 1.5), iv(-1.0, 1.0))
}

/// [`triangle`] with custom `c3` and `b2`.
pub fn triangle_with(c3: Interval, b2: Interval) -> IntervalLP {
    let a = IntervalMatrix::from_point(&DMatrix::from_row_slice(2, 3, &[1., 1., 1., 1., -1., 0.]));
    let b = IntervalVector::new(vec![Interval::point(1.0), b2]);
    let c = IntervalVector::new(vec![Interval::point(1.0), Interval::point(1.0), c3]);
    IntervalLP::equality(a, b, c).expect("consistent sample")
}

/// Costs of the 3×3 sample transportation instance.
pub const TRANSPORT_COSTS: [[f64; 3]; 3] = [[20., 30., 10.], [10., 20., 50.], [40., 10., 20.]];
pub const TRANSPORT_SUPPLIES: [f64; 3] = [100., 160., 250.];
pub const TRANSPORT_DEMANDS: [f64; 3] = [150., 210., 150.];
/// Uncertain edges of the sample, 0-based.
pub const TRANSPORT_EDGES: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 0)];

/// 3×3 transportation instance with ±10% costs, supplies and demands and the
/// given `[0,1]` edges.
pub fn transport_3x3(edges: &[(usize, usize)]) -> IntervalLP {
    let costs = IntervalMatrix::from_fn(3, 3, |i, j| Interval::relative(TRANSPORT_COSTS[i][j], 0.1));
    let rel = |v: &[f64]| v.iter().map(|&x| Interval::relative(x, 0.1)).collect::<IntervalVector>();
    build_transportation(&costs, &rel(&TRANSPORT_SUPPLIES), &rel(&TRANSPORT_DEMANDS), edges)
        .expect("consistent sample")
}
