//! Armijo-Wolfe bracketing line search.
//!
//! The search keeps a bracket `[lo, hi]` with `lo = 0`, `hi = +∞` and tries
//! `t = 1` first. A trial that fails the Armijo (sufficient decrease) test
//! shrinks `hi`; a trial that passes Armijo but fails the Wolfe (slope
//! increase) test raises `lo`. The next trial doubles `lo` while `hi` is
//! still infinite and bisects the bracket otherwise.
//!
//! Only the weak Wolfe condition is used. The slope at a trial point comes from
//! whatever gradient the oracle hands back; no differentiability check is made.

use crate::{Objective, OracleError, OracleResponse, Vector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LineSearchParams {
    /// Armijo parameter.
    pub c1: f64,
    /// Wolfe parameter.
    pub c2: f64,
    pub max_expansions: usize,
    pub max_bisections: usize,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self {
            c1: 1e-4,
            c2: 0.5,
            max_expansions: 60,
            max_bisections: 50,
        }
    }
}

impl LineSearchParams {
    pub fn with_c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn with_c2(mut self, c2: f64) -> Self {
        self.c2 = c2;
        self
    }

    pub fn validate(&self) -> Result<(), LineSearchError> {
        let ok = self.c1 > 0.0
            && self.c1 < self.c2
            && self.c2 < 1.0
            && self.max_expansions >= 1
            && self.max_bisections >= 1;
        if ok {
            Ok(())
        } else {
            Err(LineSearchError::InvalidParams(*self))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSearchStatus {
    Accepted,
    BisectionLimit,
    /// `f` kept decreasing through every doubling; it is apparently unbounded
    /// below along the search ray.
    ExpansionLimit,
    /// The next trial step coincides with a bracket end in floating point.
    RoundingFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome {
    pub status: LineSearchStatus,
    /// Accepted step, or the step of the best point seen on failure.
    pub t: f64,
    pub x_new: Vector,
    pub f_new: f64,
    pub g_new: Vector,
    /// Oracle calls made by this search.
    pub evals: usize,
}

#[derive(Debug, Error)]
pub enum LineSearchError<E = OracleError> {
    #[error("direction is not a descent direction (gᵀd = {slope:e})")]
    NotDescent { slope: f64 },
    #[error("invalid line-search parameters {0:?}")]
    InvalidParams(LineSearchParams),
    #[error("oracle failed after {evals} evaluations: {source}")]
    Oracle { source: E, evals: usize },
}

/// Sufficient decrease: `f(x + t d) ≤ f(x) + c1 t ∇f(x)ᵀd`.
pub fn armijo_holds(f0: f64, g0d: f64, t: f64, ft: f64, c1: f64) -> bool {
    ft <= f0 + c1 * t * g0d
}

/// Weak Wolfe condition: `∇f(x + t d)ᵀd ≥ c2 ∇f(x)ᵀd`.
pub fn wolfe_holds(g0d: f64, gtd: f64, c2: f64) -> bool {
    gtd >= c2 * g0d
}

/// Runs the bracketing search on an objective.
pub fn bracketing_search<P: Objective + ?Sized>(
    problem: &P,
    x: &Vector,
    d: &Vector,
    f0: f64,
    g0: &Vector,
    params: &LineSearchParams,
) -> Result<LineSearchOutcome, LineSearchError> {
    bracketing_search_with(|z| problem.eval(z), x, d, f0, g0, params)
}

/// Runs the bracketing search against an arbitrary evaluator.
///
/// The evaluator is called exactly `outcome.evals` times. An evaluator error
/// aborts the search immediately; budget enforcement in the run loop relies on
/// this.
pub fn bracketing_search_with<E, F>(
    mut eval: F,
    x: &Vector,
    d: &Vector,
    f0: f64,
    g0: &Vector,
    params: &LineSearchParams,
) -> Result<LineSearchOutcome, LineSearchError<E>>
where
    F: FnMut(&Vector) -> Result<OracleResponse, E>,
{
    if params.validate().is_err() {
        return Err(LineSearchError::InvalidParams(*params));
    }
    let g0d = g0.dot(d);
    if !(g0d < 0.0) {
        return Err(LineSearchError::NotDescent { slope: g0d });
    }

    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    let mut t = 1.0_f64;
    let mut expansions = 0;
    let mut bisections = 0;
    let mut evals = 0;
    let mut best: Option<(f64, f64, Vector, Vector)> = None;

    loop {
        let x_t = x + d * t;
        let resp = eval(&x_t).map_err(|source| LineSearchError::Oracle {
            source,
            evals: evals + 1,
        })?;
        evals += 1;
        let OracleResponse { f: f_t, g: g_t } = resp;

        if !armijo_holds(f0, g0d, t, f_t, params.c1) {
            hi = t;
        } else if !wolfe_holds(g0d, g_t.dot(d), params.c2) {
            lo = t;
        } else {
            return Ok(LineSearchOutcome {
                status: LineSearchStatus::Accepted,
                t,
                x_new: x_t,
                f_new: f_t,
                g_new: g_t,
                evals,
            });
        }

        if best.as_ref().is_none_or(|b| f_t < b.1) {
            best = Some((t, f_t, x_t, g_t));
        }

        let status = if hi.is_infinite() {
            if expansions == params.max_expansions {
                Some(LineSearchStatus::ExpansionLimit)
            } else {
                expansions += 1;
                t = 2.0 * lo;
                None
            }
        } else if bisections == params.max_bisections {
            Some(LineSearchStatus::BisectionLimit)
        } else {
            bisections += 1;
            t = 0.5 * (lo + hi);
            if t == lo || t == hi {
                Some(LineSearchStatus::RoundingFailure)
            } else {
                None
            }
        };

        if let Some(status) = status {
            let (t, f_new, x_new, g_new) = best.expect("at least one trial evaluated");
            return Ok(LineSearchOutcome {
                status,
                t,
                x_new,
                f_new,
                g_new,
                evals,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FnObjective;
    use std::cell::Cell;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn armijo_examples() {
        assert!(armijo_holds(1.0, -2.0, 1.0, 0.9998, 1e-4));
        assert!(!armijo_holds(1.0, -2.0, 1.0, 1.0, 1e-4));
        assert!(armijo_holds(5.0, -1.0, 8.0, 3.0, 1e-4));
    }

    #[test]
    fn wolfe_examples() {
        assert!(wolfe_holds(-2.0, 0.0, 0.5));
        assert!(!wolfe_holds(-1.0, -1.0, 0.5));
        assert!(wolfe_holds(-1.0, 1.0, 0.5));
    }

    #[test]
    fn quadratic_unit_step_accepted_in_one_call() {
        let p = FnObjective::new(1, |x: &Vector| (x[0] * x[0], v(&[2.0 * x[0]])));
        let out = bracketing_search(
            &p,
            &v(&[-1.0]),
            &v(&[1.0]),
            1.0,
            &v(&[-2.0]),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(out.status, LineSearchStatus::Accepted);
        assert_eq!(out.t, 1.0);
        assert_eq!(out.evals, 1);
        assert_eq!(out.f_new, 0.0);
    }

    #[test]
    fn abs_value_doubles_to_eight() {
        let p = FnObjective::new(1, |x: &Vector| {
            let s = if x[0] >= 0.0 { 1.0 } else { -1.0 };
            (x[0].abs(), v(&[s]))
        });
        let out = bracketing_search(
            &p,
            &v(&[-5.0]),
            &v(&[1.0]),
            5.0,
            &v(&[-1.0]),
            &Default::default(),
        )
        .unwrap();
        assert_eq!(out.status, LineSearchStatus::Accepted);
        assert_eq!(out.t, 8.0);
        assert_eq!(out.evals, 4);
        assert_eq!(out.x_new[0], 3.0);
    }

    #[test]
    fn linear_function_hits_expansion_limit_monotonically() {
        let fs = std::cell::RefCell::new(Vec::new());
        let eval = |x: &Vector| -> Result<OracleResponse, OracleError> {
            let f = x.sum();
            fs.borrow_mut().push(f);
            Ok(OracleResponse::new(f, Vector::from_element(3, 1.0)))
        };
        let x = Vector::zeros(3);
        let g = Vector::from_element(3, 1.0);
        let d = -&g;
        let params = LineSearchParams::default();
        let out = bracketing_search_with(eval, &x, &d, 0.0, &g, &params).unwrap();
        assert_eq!(out.status, LineSearchStatus::ExpansionLimit);
        assert_eq!(out.evals, params.max_expansions + 1);
        let fs = fs.into_inner();
        assert_eq!(fs.len(), out.evals);
        assert!(fs.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(out.f_new, *fs.last().unwrap());
    }

    #[test]
    fn non_descent_is_an_error() {
        let p = FnObjective::new(1, |x: &Vector| (x[0], v(&[1.0])));
        let err = bracketing_search(
            &p,
            &v(&[0.0]),
            &v(&[1.0]),
            0.0,
            &v(&[1.0]),
            &Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, LineSearchError::NotDescent { .. }));
        let err = bracketing_search(
            &p,
            &v(&[0.0]),
            &v(&[0.0]),
            0.0,
            &v(&[1.0]),
            &Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, LineSearchError::NotDescent { .. }));
    }

    #[test]
    fn invalid_params_rejected() {
        let p = FnObjective::new(1, |x: &Vector| (x[0], v(&[1.0])));
        let params = LineSearchParams::default().with_c1(0.6);
        let err =
            bracketing_search(&p, &v(&[0.0]), &v(&[-1.0]), 0.0, &v(&[1.0]), &params).unwrap_err();
        assert!(matches!(err, LineSearchError::InvalidParams(_)));
    }

    #[test]
    fn false_slope_gives_bisection_limit_with_best_point() {
        // The oracle lies about the slope, so every trial fails Armijo.
        let p = FnObjective::new(1, |x: &Vector| (x[0] * x[0] + 1.0, v(&[-1.0])));
        let params = LineSearchParams {
            max_bisections: 10,
            ..Default::default()
        };
        let out = bracketing_search(&p, &v(&[0.0]), &v(&[1.0]), 1.0, &v(&[-1.0]), &params).unwrap();
        assert_eq!(out.status, LineSearchStatus::BisectionLimit);
        assert_eq!(out.evals, 11);
        assert_eq!(out.t, 0.5f64.powi(10));
    }

    #[test]
    fn collapsed_bracket_is_rounding_failure() {
        // Armijo holds exactly on (0, 1] and Wolfe never does, so the bracket
        // shrinks onto [1, 1 + ulp] and the midpoint rounds to an endpoint.
        let p = FnObjective::new(1, |x: &Vector| {
            let f = if x[0] <= 1.0 { -x[0] } else { 1.0 };
            (f, v(&[-1.0]))
        });
        let params = LineSearchParams {
            max_bisections: 100,
            ..Default::default()
        };
        let out = bracketing_search(&p, &v(&[0.0]), &v(&[1.0]), 0.0, &v(&[-1.0]), &params).unwrap();
        assert_eq!(out.status, LineSearchStatus::RoundingFailure);
        assert_eq!(out.t, 1.0);
        assert_eq!(out.f_new, -1.0);
        // t = 1, t = 2, then 52 halvings of the gap [1, 2].
        assert_eq!(out.evals, 54);
    }

    #[test]
    fn oracle_error_stops_the_search() {
        let calls = Cell::new(0);
        let eval = |_: &Vector| -> Result<OracleResponse, &'static str> {
            calls.set(calls.get() + 1);
            if calls.get() == 3 {
                Err("budget")
            } else {
                Ok(OracleResponse::new(-(calls.get() as f64), v(&[-1.0])))
            }
        };
        let err = bracketing_search_with(
            eval,
            &v(&[0.0]),
            &v(&[1.0]),
            0.0,
            &v(&[-1.0]),
            &Default::default(),
        )
        .unwrap_err();
        match err {
            LineSearchError::Oracle { source, evals } => {
                assert_eq!(source, "budget");
                assert_eq!(evals, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(calls.get(), 3);
    }
}
