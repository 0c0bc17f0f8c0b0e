//! Nesterov smoothings of the nonsmooth objectives.
//!
//! Each smoothing replaces a maximum of `K` terms by `μ log Σ e^{termᵢ/μ}`
//! minus `μ log K`, so the smoothed value sits within `μ log K` below the
//! nonsmooth one (times the penalty `α` for the SDP duals). All sums are
//! shifted by their largest exponent before exponentiating; `μ` as small as
//! `1e-16` is fine.
//!
//! [`Smoothed`] pairs a nonsmooth problem with a [`SmoothingParams`] and
//! implements [`Objective`](crate::Objective) for every problem that has a
//! smoothing.

mod lse;
mod spectral;

pub use lse::{logsumexp_sym, SymLse};
pub use spectral::{eval_smoothed_matcomp, eval_smoothed_max_eig, eval_smoothed_maxcut};

pub(crate) use lse::logsumexp_spectrum;

use serde::{Deserialize, Serialize};

use crate::problems::{les_houches_term, LesHouchesProblem, ProblemError};
use crate::{Objective, OracleError, OracleResponse, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SmoothingParams {
    mu: f64,
}

impl SmoothingParams {
    pub fn new(mu: f64) -> Result<Self, ProblemError> {
        if mu > 0.0 && mu.is_finite() {
            Ok(Self { mu })
        } else {
            Err(ProblemError::Invalid(format!(
                "smoothing parameter μ must be positive and finite, got {mu}"
            )))
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl TryFrom<f64> for SmoothingParams {
    type Error = ProblemError;

    fn try_from(mu: f64) -> Result<Self, Self::Error> {
        Self::new(mu)
    }
}

impl From<SmoothingParams> for f64 {
    fn from(p: SmoothingParams) -> f64 {
        p.mu
    }
}

/// The lower bidiagonal matrix with `1` on the diagonal and `−2` below it,
/// applied implicitly: `(Ax)₁ = x₁`, `(Ax)ᵢ = xᵢ − 2xᵢ₋₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandedDiffMatrix {
    n: usize,
}

impl BandedDiffMatrix {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::from_fn(self.n, |i, _| les_houches_term(x, i))
    }

    pub fn apply_transpose(&self, v: &Vector) -> Vector {
        Vector::from_fn(self.n, |j, _| {
            if j + 1 < self.n {
                v[j] - 2.0 * v[j + 1]
            } else {
                v[j]
            }
        })
    }

    /// Spectral norm `‖A‖₂` by power iteration on `AᵀA`, stopping when the
    /// Rayleigh quotient changes by less than `tol` (relative).
    pub fn norm2(&self, tol: f64) -> f64 {
        // Alternating signs line up with the dominant singular vector.
        let mut v = Vector::from_fn(self.n, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 });
        v.normalize_mut();
        let mut est = 0.0_f64;
        for _ in 0..100_000 {
            let w = self.apply_transpose(&self.apply(&v));
            let next = v.dot(&w);
            v = w.normalize();
            if (next - est).abs() <= tol * next {
                est = next;
                break;
            }
            est = next;
        }
        est.sqrt()
    }
}

/// A nonsmooth problem together with its smoothing parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed<P> {
    pub problem: P,
    pub params: SmoothingParams,
}

impl<P> Smoothed<P> {
    pub fn new(problem: P, mu: f64) -> Result<Self, ProblemError> {
        Ok(Self {
            problem,
            params: SmoothingParams::new(mu)?,
        })
    }

    pub fn mu(&self) -> f64 {
        self.params.mu()
    }
}

/// `f_μ(x) = g_μ(Ax)`, gradient `Aᵀ(w⁺ − w⁻)`.
pub fn eval_smoothed_les_houches(
    n: usize,
    mu: f64,
    x: &Vector,
) -> Result<OracleResponse, ProblemError> {
    let params = SmoothingParams::new(mu)?;
    if x.len() != n {
        return Err(ProblemError::Invalid(format!(
            "x has length {}, expected {n}",
            x.len()
        )));
    }
    Ok(smoothed_les_houches(BandedDiffMatrix::new(n), &params, x))
}

fn smoothed_les_houches(
    a: BandedDiffMatrix,
    params: &SmoothingParams,
    x: &Vector,
) -> OracleResponse {
    let lse = lse::logsumexp_sym_with(&a.apply(x), params);
    OracleResponse {
        f: lse.value,
        g: a.apply_transpose(&lse.gradient()),
    }
}

impl Objective for Smoothed<LesHouchesProblem> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(x)?;
        Ok(smoothed_les_houches(
            BandedDiffMatrix::new(self.dim()),
            &self.params,
            x,
        ))
    }
}

/// The smoothed vector maximum `g_μ(y)` itself, as an objective over `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedVecMax {
    n: usize,
    params: SmoothingParams,
}

impl SmoothedVecMax {
    pub fn new(n: usize, mu: f64) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::Invalid("n must be ≥ 1".into()));
        }
        Ok(Self {
            n,
            params: SmoothingParams::new(mu)?,
        })
    }
}

impl Objective for SmoothedVecMax {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        let lse = lse::logsumexp_sym_with(y, &self.params);
        Ok(OracleResponse {
            f: lse.value,
            g: lse.gradient(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    #[test]
    fn banded_matrix_matches_dense() {
        let n = 6;
        let a = BandedDiffMatrix::new(n);
        let dense = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else if i == j + 1 {
                -2.0
            } else {
                0.0
            }
        });
        let x = Vector::from_fn(n, |i, _| (i as f64).sin());
        assert_eq!(a.apply(&x), &dense * &x);
        assert_eq!(a.apply_transpose(&x), dense.transpose() * &x);
        let svd_norm = dense.singular_values().max();
        assert!((a.norm2(1e-10) - svd_norm).abs() < 1e-6 * svd_norm);
    }

    #[test]
    fn smoothed_les_houches_at_zero() {
        let r = eval_smoothed_les_houches(7, 1e-3, &Vector::zeros(7)).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.g, Vector::zeros(7));
    }

    #[test]
    fn smoothed_les_houches_within_mu_log_2n() {
        let n = 10;
        let p = LesHouchesProblem::new(n).unwrap();
        for mu in [1e-1, 1e-4] {
            let s = Smoothed::new(p, mu).unwrap();
            for k in 0..20 {
                let x = Vector::from_fn(n, |i, _| ((i * 7 + k * 3) as f64).cos());
                let f = p.eval(&x).unwrap().f;
                let fm = s.eval(&x).unwrap().f;
                assert!(fm <= f + 1e-12);
                assert!(fm >= f - mu * (2.0 * n as f64).ln() - 1e-12);
            }
        }
    }

    #[test]
    fn params_reject_nonpositive() {
        assert!(SmoothingParams::new(0.0).is_err());
        assert!(SmoothingParams::new(-1e-3).is_err());
        assert!(serde_json::from_str::<SmoothingParams>("-1.0").is_err());
        assert_eq!(
            serde_json::from_str::<SmoothingParams>("0.5").unwrap().mu(),
            0.5
        );
    }
}
