use serde::{Deserialize, Serialize};

use crate::{Objective, OracleError, OracleResponse, Vector};

use super::{sign, ProblemError};

/// `f(x) = max{|x₁|, |xᵢ − 2xᵢ₋₁| : i = 2..n}`. Minimizer `0`, `f* = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LesHouchesProblem {
    n: usize,
}

impl LesHouchesProblem {
    pub fn new(n: usize) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::Invalid("n must be ≥ 1".into()));
        }
        Ok(Self { n })
    }
}

/// The i-th inner term (0-based): `x₀` or `xᵢ − 2xᵢ₋₁`.
#[inline]
pub(crate) fn term(x: &Vector, i: usize) -> f64 {
    if i == 0 {
        x[0]
    } else {
        x[i] - 2.0 * x[i - 1]
    }
}

pub fn eval_les_houches(p: &LesHouchesProblem, x: &Vector) -> OracleResponse {
    let mut arg = 0;
    let mut best = term(x, 0).abs();
    for i in 1..p.n {
        let v = term(x, i).abs();
        if v > best {
            best = v;
            arg = i;
        }
    }
    let s = sign(term(x, arg));
    let mut g = Vector::zeros(p.n);
    g[arg] = s;
    if arg > 0 {
        g[arg - 1] = -2.0 * s;
    }
    OracleResponse { f: best, g }
}

impl Objective for LesHouchesProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(x)?;
        Ok(eval_les_houches(self, x))
    }
}

/// Largest `n` for which `2ⁿ − 1` is exact in `f64`.
pub const WITNESS_MAX_N: usize = 52;

/// The point `x̂ᵢ = 2ⁱ − 1` with `f(x̂) = 1` but `‖x̂‖_∞ ≈ 2ⁿ`.
pub fn gen_les_houches_witness(n: usize) -> Result<Vector, ProblemError> {
    if n == 0 || n > WITNESS_MAX_N {
        return Err(ProblemError::Invalid(format!(
            "witness needs 1 ≤ n ≤ {WITNESS_MAX_N}, got {n}"
        )));
    }
    let mut x = Vector::zeros(n);
    x[0] = 1.0;
    for i in 1..n {
        x[i] = 2.0 * x[i - 1] + 1.0;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_and_zero() {
        let p = LesHouchesProblem::new(8).unwrap();
        assert_eq!(p.eval(&Vector::from_element(8, 1.0)).unwrap().f, 1.0);
        assert_eq!(p.eval(&Vector::zeros(8)).unwrap().f, 0.0);
    }

    #[test]
    fn witness() {
        assert_eq!(gen_les_houches_witness(1).unwrap().as_slice(), &[1.0]);
        assert_eq!(
            gen_les_houches_witness(3).unwrap().as_slice(),
            &[1.0, 3.0, 7.0]
        );
        assert_eq!(gen_les_houches_witness(4).unwrap().amax(), 15.0);
        for n in [1, 5, 20, 52] {
            let x = gen_les_houches_witness(n).unwrap();
            let p = LesHouchesProblem::new(n).unwrap();
            assert_eq!(p.eval(&x).unwrap().f, 1.0);
            assert_eq!(x[n - 1], 2f64.powi(n as i32) - 1.0);
        }
        assert!(gen_les_houches_witness(0).is_err());
        assert!(gen_les_houches_witness(53).is_err());
    }

    #[test]
    fn gradient_of_active_term() {
        let p = LesHouchesProblem::new(3).unwrap();
        // terms: 0.1, 1.0 - 0.2 = 0.8, -3 - 2 = -5
        let r = p
            .eval(&Vector::from_column_slice(&[0.1, 1.0, -3.0]))
            .unwrap();
        assert_eq!(r.f, 5.0);
        assert_eq!(r.g.as_slice(), &[0.0, 2.0, -1.0]);
    }

    #[test]
    fn ties_pick_lowest_index() {
        let p = LesHouchesProblem::new(3).unwrap();
        // all three terms equal 1 at x = 1
        let r = p.eval(&Vector::from_element(3, 1.0)).unwrap();
        assert_eq!(r.g.as_slice(), &[1.0, 0.0, 0.0]);
        // at zero every term ties and sign(0) = +1
        let r = p.eval(&Vector::zeros(3)).unwrap();
        assert_eq!(r.g.as_slice(), &[1.0, 0.0, 0.0]);
    }
}
