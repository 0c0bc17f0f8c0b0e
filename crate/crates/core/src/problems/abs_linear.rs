use serde::{Deserialize, Serialize};

use crate::{Objective, OracleError, OracleResponse, Vector};

use super::{sign, ProblemError};

/// `f(x) = a|x₁| + Σ_{i≥2} xᵢ`, unbounded below but bounded below along every
/// steepest-descent ray once `a ≥ √(n−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsLinearProblem {
    a: f64,
    n: usize,
}

impl AbsLinearProblem {
    pub fn new(a: f64, n: usize) -> Result<Self, ProblemError> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(ProblemError::Invalid(format!(
                "a must be finite and ≥ 0, got {a}"
            )));
        }
        if n < 2 {
            return Err(ProblemError::Invalid(format!("n must be ≥ 2, got {n}")));
        }
        Ok(Self { a, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

pub fn eval_abs_linear(p: &AbsLinearProblem, x: &Vector) -> OracleResponse {
    let f = p.a * x[0].abs() + x.rows(1, p.n - 1).sum();
    let mut g = Vector::from_element(p.n, 1.0);
    g[0] = p.a * sign(x[0]);
    OracleResponse { f, g }
}

impl Objective for AbsLinearProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(x)?;
        Ok(eval_abs_linear(self, x))
    }
}
