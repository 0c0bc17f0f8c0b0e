//! Quasi-Newton methods on nonsmooth convex problems.
//!
//! `nslab` pairs a small family of descent methods (full BFGS, limited-memory
//! BFGS with and without Barzilai-Borwein scaling, the gradient method and the
//! subgradient method) with a set of nonsmooth test objectives and their
//! Nesterov smoothings. Every method talks to its objective through a
//! *gradient oracle*: given `x`, the objective returns `f(x)` and the gradient
//! of whichever smooth piece is active at `x`, breaking ties by a fixed rule.
//! No attempt is made to detect nondifferentiability.
//!
//! The crate is organized as
//!
//! - [`linesearch`]: Armijo-Wolfe bracketing line search (doubling + bisection),
//! - [`solvers`]: BFGS update, two-loop recursion, the budgeted run loop and
//!   run classification,
//! - [`problems`]: nonsmooth objectives (`a|x₁| + Σxᵢ`, Les Houches, max
//!   eigenvalue, exact-penalty duals for Max Cut and Matrix Completion) and
//!   seeded instance generators,
//! - [`smoothing`]: log-sum-exp smoothings of each objective,
//! - [`lab`]: experiment configuration, sweeps, CSV output and diagnostics.
//!
//! ```
//! use nslab::problems::LesHouchesProblem;
//! use nslab::solvers::{run, Method, SolverConfig};
//! use nslab::Vector;
//!
//! let problem = LesHouchesProblem::new(5).unwrap();
//! let cfg = SolverConfig::new(Method::Bfgs).with_max_evals(2000);
//! let x0 = Vector::from_column_slice(&[0.9, 1.05, 0.97, 1.1, 0.93]);
//! let record = run(&problem, &x0, &cfg).unwrap();
//! assert!(record.final_f < 1e-3);
//! ```

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod lab;
pub mod linesearch;
pub mod problems;
pub mod smoothing;
pub mod solvers;

use thiserror::Error;

/// Dense real coordinate vector used for iterates, gradients and directions.
pub type Vector = nalgebra::DVector<f64>;

/// Dense real matrix.
pub type Matrix = nalgebra::DMatrix<f64>;

/// Function value and gradient returned by an oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResponse {
    pub f: f64,
    pub g: Vector,
}

impl OracleResponse {
    pub fn new(f: f64, g: Vector) -> Self {
        Self { f, g }
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.g.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("input has length {got}, objective expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("eigendecomposition residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Eigen { residual: f64, tolerance: f64 },
    #[error("non-finite oracle output: {0}")]
    NonFinite(String),
}

/// A gradient oracle: an objective that reports `f(x)` together with a
/// gradient, treating `f` as differentiable everywhere.
///
/// Implementations must be pure functions of `(self, x)`.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError>;

    fn check_dim(&self, x: &Vector) -> Result<(), OracleError> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(OracleError::Dimension {
                expected: self.dim(),
                got: x.len(),
            })
        }
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        (**self).eval(x)
    }
}

impl<T: Objective + ?Sized + Send> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        (**self).eval(x)
    }
}

/// An objective given by a closure, mostly useful in tests and examples.
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(x)?;
        let (f, g) = (self.f)(x);
        Ok(OracleResponse { f, g })
    }
}
