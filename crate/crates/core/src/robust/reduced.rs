use crate::interval::{IntervalMatrix, IntervalVector};
use crate::model::{ActiveSets, IntervalLP};

use super::Direction;

/// Blocks of the optimality criterion for fixed active sets:
/// sign-restricted part `x̃ = x_I` and free part `ỹ = (x_J, y)`, with
/// `Ã = A_I`, `B̃ = (A_J | B)`, `C̃ = C_{K,I}`, `D̃ = (C_{K,J} | D_K)`,
/// `c̃ = c_I`, `d̃ = (c_J, d)`.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub sets: ActiveSets,
    pub n_x: usize,
    pub n_y: usize,
    pub a: IntervalMatrix,
    pub b: IntervalMatrix,
    pub c: IntervalMatrix,
    pub d: IntervalMatrix,
    pub cost_fixed: IntervalVector,
    pub cost_free: IntervalVector,
    pub equality_form: bool,
}

impl Reduced {
    pub fn new(p: &IntervalLP, sets: &ActiveSets) -> Self {
        let (i, j, k) = (&sets.zero, &sets.positive, &sets.ineq_active);
        let hcat = |l: IntervalMatrix, r: &IntervalMatrix| l.hstack(r).expect("row counts agree");
        let ck = p.ineq_x().select_rows(k);
        Self {
            sets: sets.clone(),
            n_x: p.n(),
            n_y: p.n_prime(),
            a: p.eq_x().select_columns(i),
            b: hcat(p.eq_x().select_columns(j), p.eq_y()),
            c: ck.select_columns(i),
            d: hcat(ck.select_columns(j), &p.ineq_y().select_rows(k)),
            cost_fixed: p.cost_x().select(i),
            cost_free: p.cost_x().select(j).concat(p.cost_y()),
            equality_form: p.is_equality_form(),
        }
    }

    /// `|I|`.
    pub fn n_fixed(&self) -> usize {
        self.sets.zero.len()
    }

    /// `|J| + n'`, the length of the sign vectors.
    pub fn n_free(&self) -> usize {
        self.sets.positive.len() + self.n_y
    }

    /// Maps reduced coordinates `(x̃, ỹ)` back to a full direction.
    pub fn expand(&self, z: &[f64]) -> Direction {
        let nf = self.n_fixed();
        let nj = self.sets.positive.len();
        let mut x = vec![0.0; self.n_x];
        for (t, &i) in self.sets.zero.iter().enumerate() {
            x[i] = z[t];
        }
        for (t, &j) in self.sets.positive.iter().enumerate() {
            x[j] = z[nf + t];
        }
        Direction { x, y: z[nf + nj..].to_vec() }
    }

    /// Inverse of [`Reduced::expand`].
    pub fn restrict(&self, dir: &Direction) -> Vec<f64> {
        let mut z: Vec<f64> = self.sets.zero.iter().map(|&i| dir.x[i]).collect();
        z.extend(self.sets.positive.iter().map(|&j| dir.x[j]));
        z.extend_from_slice(&dir.y);
        z
    }
}
