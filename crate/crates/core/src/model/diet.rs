use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalMatrix, IntervalVector};

use super::{IntervalLP, ModelError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DietNutrient {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    pub requirement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DietFood {
    pub name: String,
    /// Nutrient content per unit of food, in nutrient order.
    pub values: Vec<f64>,
}

/// Diet data: nutrient requirements and nutritive values of foods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DietData {
    #[serde(default)]
    pub description: String,
    pub nutrients: Vec<DietNutrient>,
    pub foods: Vec<DietFood>,
    /// Food prices; all ones when the values are already per unit cost.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<f64>>,
}

/// Relative radii applied around the nominal diet data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DietOptions {
    pub matrix_rel: f64,
    pub rhs_rel: f64,
    pub cost_rel: f64,
}

impl Default for DietOptions {
    fn default() -> Self {
        Self { matrix_rel: 0.05, rhs_rel: 0.10, cost_rel: 0.0 }
    }
}

impl DietData {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let data: DietData = serde_json::from_str(text).map_err(|e| ModelError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let m = data.nutrients.len();
        for f in &data.foods {
            if f.values.len() != m {
                return Err(ModelError::Field {
                    field: format!("foods.{}.values", f.name),
                    msg: format!("expected {m} entries, found {}", f.values.len()),
                });
            }
        }
        if let Some(c) = &data.costs {
            if c.len() != data.foods.len() {
                return Err(ModelError::Field {
                    field: "costs".into(),
                    msg: format!("expected {} entries, found {}", data.foods.len(), c.len()),
                });
            }
        }
        Ok(data)
    }

    /// `Ax = b` with `A` nutrients × foods.
    pub fn to_lp(&self, opts: &DietOptions) -> Result<IntervalLP, ModelError> {
        let (m, n) = (self.nutrients.len(), self.foods.len());
        let a = IntervalMatrix::from_fn(m, n, |i, j| Interval::relative(self.foods[j].values[i], opts.matrix_rel));
        let b: IntervalVector =
            self.nutrients.iter().map(|nu| Interval::relative(nu.requirement, opts.rhs_rel)).collect();
        let c: IntervalVector = match &self.costs {
            Some(c) => c.iter().map(|&v| Interval::relative(v, opts.cost_rel)).collect(),
            None => (0..n).map(|_| Interval::relative(1.0, opts.cost_rel)).collect(),
        };
        IntervalLP::equality(a, b, c)
    }

    pub fn food_names(&self) -> Vec<&str> {
        self.foods.iter().map(|f| f.name.as_str()).collect()
    }
}

pub fn load_diet(path: impl AsRef<Path>, opts: &DietOptions) -> Result<IntervalLP, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ModelError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    DietData::parse(&text)?.to_lp(opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data_shape() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/diet.json");
        let p = load_diet(path, &DietOptions::default()).unwrap();
        assert_eq!((p.m(), p.n()), (9, 20));
        assert!(p.cost_x().iter().all(|c| c.lo() == 1.0 && c.hi() == 1.0));
        let r = p.eq_x()[(0, 0)];
        assert!((r.rad() - 0.05 * 44.7).abs() < 1e-9);
        assert!((p.eq_rhs()[0].rad() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ragged_food_rejected() {
        let text = r#"{"nutrients":[{"name":"a","requirement":1}],"foods":[{"name":"x","values":[1,2]}]}"#;
        assert!(matches!(DietData::parse(text), Err(ModelError::Field { .. })));
    }
}
