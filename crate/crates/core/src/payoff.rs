//! Catalog of payoff functions `F: [0,1] -> [0,1]` with computable
//! derivative bounds.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// The raw parameterization of a payoff function, as written in game files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffForm {
    /// `F(z) = value`.
    Constant { value: f64 },
    /// `F(z) = a + b z`.
    Affine { a: f64, b: f64 },
    /// `F(z) = a + b z + c z^2`.
    Quadratic { a: f64, b: f64, c: f64 },
    /// Linear interpolation between `(z, value)` points whose first `z` is 0
    /// and last `z` is 1.
    PiecewiseLinear { points: Vec<[f64; 2]> },
}

/// A validated payoff function. Construction rejects any form whose range
/// leaves `[0, 1]` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PayoffForm", into = "PayoffForm")]
pub struct PayoffFn {
    form: PayoffForm,
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl PayoffFn {
    pub fn new(form: PayoffForm) -> Result<Self> {
        match &form {
            PayoffForm::Constant { value } => {
                if !in_unit(*value) {
                    return Err(input(format!("constant payoff {value} is outside [0, 1]")));
                }
            }
            PayoffForm::Affine { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(input("affine coefficients must be finite"));
                }
                if !in_unit(*a) || !in_unit(a + b) {
                    return Err(input(format!(
                        "affine payoff {a} + {b} z leaves [0, 1] on [0, 1]"
                    )));
                }
            }
            PayoffForm::Quadratic { a, b, c } => {
                if !a.is_finite() || !b.is_finite() || !c.is_finite() {
                    return Err(input("quadratic coefficients must be finite"));
                }
                let mut probes = vec![0.0, 1.0];
                if *c != 0.0 {
                    let vertex = -b / (2.0 * c);
                    if (0.0..=1.0).contains(&vertex) {
                        probes.push(vertex);
                    }
                }
                for z in probes {
                    let v = a + b * z + c * z * z;
                    if !in_unit(v) {
                        return Err(input(format!(
                            "quadratic payoff takes value {v} at z = {z}, outside [0, 1]"
                        )));
                    }
                }
            }
            PayoffForm::PiecewiseLinear { points } => {
                if points.len() < 2 {
                    return Err(input("piecewise-linear payoff needs at least two points"));
                }
                if points[0][0] != 0.0 || points[points.len() - 1][0] != 1.0 {
                    return Err(input(
                        "piecewise-linear breakpoints must start at z = 0 and end at z = 1",
                    ));
                }
                for (j, w) in points.windows(2).enumerate() {
                    if !(w[0][0] < w[1][0]) {
                        return Err(input(format!(
                            "breakpoints {j} and {} are not strictly increasing in z",
                            j + 1
                        )));
                    }
                }
                if let Some(j) = points.iter().position(|p| !in_unit(p[1])) {
                    return Err(input(format!(
                        "breakpoint {j} has value {}, outside [0, 1]",
                        points[j][1]
                    )));
                }
            }
        }
        Ok(PayoffFn { form })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(PayoffForm::Constant { value })
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        Self::new(PayoffForm::Affine { a, b })
    }

    pub fn quadratic(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(PayoffForm::Quadratic { a, b, c })
    }

    pub fn piecewise_linear(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(PayoffForm::PiecewiseLinear { points })
    }

    pub fn form(&self) -> &PayoffForm {
        &self.form
    }

    /// `F(z)` for `z` in `[0, 1]`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) {
            return Err(input(format!("payoff argument {z} is outside [0, 1]")));
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the domain check; the result is clamped to `[0, 1]`
    /// to absorb rounding in the polynomial forms.
    pub(crate) fn eval_unchecked(&self, z: f64) -> f64 {
        let v = match &self.form {
            PayoffForm::Constant { value } => *value,
            PayoffForm::Affine { a, b } => a + b * z,
            PayoffForm::Quadratic { a, b, c } => a + b * z + c * z * z,
            PayoffForm::PiecewiseLinear { points } => {
                // First segment whose right end is >= z.
                let j = points
                    .partition_point(|p| p[0] < z)
                    .clamp(1, points.len() - 1);
                let [z0, v0] = points[j - 1];
                let [z1, v1] = points[j];
                v0 + (v1 - v0) * (z - z0) / (z1 - z0)
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// An upper bound on `|F'(z)|` over `[0, 1]`; for quadratics the bound
    /// `|b| + 2|c|` rather than the tight maximum.
    pub fn derivative_bound(&self) -> f64 {
        match &self.form {
            PayoffForm::Constant { .. } => 0.0,
            PayoffForm::Affine { b, .. } => b.abs(),
            PayoffForm::Quadratic { b, c, .. } => b.abs() + 2.0 * c.abs(),
            PayoffForm::PiecewiseLinear { points } => points
                .windows(2)
                .map(|w| ((w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).abs())
                .fold(0.0, f64::max),
        }
    }
}

impl TryFrom<PayoffForm> for PayoffFn {
    type Error = crate::Error;

    fn try_from(form: PayoffForm) -> Result<Self> {
        PayoffFn::new(form)
    }
}

impl From<PayoffFn> for PayoffForm {
    fn from(f: PayoffFn) -> Self {
        f.form
    }
}
