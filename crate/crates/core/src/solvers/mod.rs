//! Descent methods and the budgeted run loop.
//!
//! [`run`] drives one of four methods against an [`Objective`](crate::Objective):
//!
//! - **BFGS** keeps a dense inverse-Hessian approximation `H` (starting at `I`)
//!   and steps along `−H g`,
//! - **L-BFGS-m** replays the `m` newest curvature pairs through the two-loop
//!   recursion, optionally with Barzilai-Borwein scaling of the initial matrix,
//! - the **gradient method** steps along `−g`,
//! - the **subgradient method** takes the fixed step `x − g/k` with no line
//!   search.
//!
//! The first three share [`bracketing_search`](crate::linesearch::bracketing_search).
//! Every oracle call lands in the run's trace, and the run ends in one of the
//! [`RunStatus`] classes decided by [`classify_run`].

mod classify;
mod driver;
mod update;

pub use classify::{classify_run, ClassifyParams, TerminalCause};
pub use driver::run;
pub use update::{bfgs_update, subgradient_step, two_loop_direction, CurvaturePair, MemoryBuffer};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linesearch::LineSearchParams;
use crate::Vector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("curvature condition sᵀy > 0 violated (sᵀy = {sy:e})")]
    Curvature { sy: f64 },
    #[error("starting point has length {got}, problem dimension is {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("starting point is not finite")]
    NonFiniteStart,
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Bfgs,
    Lbfgs { m: usize, scaled: bool },
    Gradient,
    Subgradient,
}

impl Method {
    /// Short label used in file names and summaries, e.g. `sc-lbfgs-5`.
    pub fn label(&self) -> String {
        match self {
            Method::Bfgs => "bfgs".into(),
            Method::Lbfgs { m, scaled: true } => format!("sc-lbfgs-{m}"),
            Method::Lbfgs { m, scaled: false } => format!("no-lbfgs-{m}"),
            Method::Gradient => "gradient".into(),
            Method::Subgradient => "subgradient".into(),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = SolverError;

    /// Inverse of [`Method::label`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SolverError::Config(format!("unknown method '{s}'"));
        match s {
            "bfgs" => Ok(Method::Bfgs),
            "gradient" => Ok(Method::Gradient),
            "subgradient" => Ok(Method::Subgradient),
            _ => {
                let (scaled, m) = if let Some(m) = s.strip_prefix("sc-lbfgs-") {
                    (true, m)
                } else if let Some(m) = s.strip_prefix("no-lbfgs-") {
                    (false, m)
                } else {
                    return Err(bad());
                };
                let m: usize = m.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                Ok(Method::Lbfgs { m, scaled })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    #[serde(flatten)]
    pub method: Method,
    #[serde(default)]
    pub ls: LineSearchParams,
    #[serde(default = "defaults::max_evals")]
    pub max_evals: usize,
    #[serde(default = "defaults::max_iters")]
    pub max_iters: usize,
    /// Stop once `‖g‖ ≤ grad_tol`. Zero runs to the budget.
    #[serde(default)]
    pub grad_tol: f64,
    /// Any `f` below this declares the objective unbounded below.
    #[serde(default = "defaults::unbounded_floor")]
    pub unbounded_floor: f64,
    /// Known optimal value, used only for classification.
    #[serde(default)]
    pub f_star: Option<f64>,
    #[serde(default = "defaults::f_rel_tol")]
    pub f_rel_tol: f64,
    /// Recorded in the run record; the solvers themselves draw no randomness.
    #[serde(default)]
    pub seed: u64,
}

mod defaults {
    pub fn max_evals() -> usize {
        10_000
    }
    pub fn max_iters() -> usize {
        1_000_000
    }
    pub fn unbounded_floor() -> f64 {
        -1e12
    }
    pub fn f_rel_tol() -> f64 {
        1e-8
    }
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            ls: LineSearchParams::default(),
            max_evals: defaults::max_evals(),
            max_iters: defaults::max_iters(),
            grad_tol: 0.0,
            unbounded_floor: defaults::unbounded_floor(),
            f_star: None,
            f_rel_tol: defaults::f_rel_tol(),
            seed: 0,
        }
    }

    pub fn with_max_evals(mut self, n: usize) -> Self {
        self.max_evals = n;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn with_grad_tol(mut self, tol: f64) -> Self {
        self.grad_tol = tol;
        self
    }

    pub fn with_line_search(mut self, ls: LineSearchParams) -> Self {
        self.ls = ls;
        self
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.max_evals < 1 {
            return Err(SolverError::Config("max_evals must be at least 1".into()));
        }
        if !(self.grad_tol >= 0.0) {
            return Err(SolverError::Config("grad_tol must be nonnegative".into()));
        }
        if let Method::Lbfgs { m, .. } = self.method {
            if m < 1 {
                return Err(SolverError::Config(
                    "L-BFGS memory must be at least 1".into(),
                ));
            }
        }
        self.ls
            .validate()
            .map_err(|e| SolverError::Config(e.to_string()))
    }

    pub fn classify_params(&self) -> ClassifyParams {
        ClassifyParams {
            grad_tol: self.grad_tol,
            f_star: self.f_star,
            f_rel_tol: self.f_rel_tol,
            unbounded_floor: self.unbounded_floor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceNote {
    Iterate,
    LsEval,
}

impl TraceNote {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceNote::Iterate => "iterate",
            TraceNote::LsEval => "ls_eval",
        }
    }
}

/// One oracle call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// Iterate index the call belongs to; `0` is the starting point.
    pub iter: usize,
    pub cum_evals: usize,
    pub f: f64,
    pub gnorm: f64,
    /// Accepted step for iterate rows, `0` for rejected line-search trials.
    pub step: f64,
    pub note: TraceNote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    Breakdown,
    BudgetExhausted,
    UnboundedDetected,
    Stalled,
}

impl RunStatus {
    pub const ALL: [RunStatus; 5] = [
        RunStatus::Converged,
        RunStatus::Breakdown,
        RunStatus::BudgetExhausted,
        RunStatus::UnboundedDetected,
        RunStatus::Stalled,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::Breakdown => "breakdown",
            RunStatus::BudgetExhausted => "budget_exhausted",
            RunStatus::UnboundedDetected => "unbounded_detected",
            RunStatus::Stalled => "stalled",
        }
    }
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: Method,
    pub status: RunStatus,
    pub cause: TerminalCause,
    /// Lowest `f` among all evaluated points, and where it was evaluated.
    pub final_f: f64,
    pub final_x: Vector,
    /// Last accepted iterate.
    pub last_x: Vector,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub evals: usize,
    pub seed: u64,
    pub wall_seconds: f64,
    pub note: Option<String>,
}

impl RunRecord {
    /// Iterate rows only.
    pub fn iterates(&self) -> impl Iterator<Item = &TraceRow> {
        self.trace.iter().filter(|r| r.note == TraceNote::Iterate)
    }

    pub fn evals_per_iteration(&self) -> f64 {
        if self.iterations == 0 {
            self.evals as f64
        } else {
            // The starting point's evaluation is not part of any line search.
            (self.evals.saturating_sub(1)) as f64 / self.iterations as f64
        }
    }
}
