use serde::{Deserialize, Serialize};

use super::{RunStatus, TraceNote, TraceRow};

/// Why the run loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalCause {
    GradTol,
    UnboundedFloor,
    ExpansionLimit,
    BisectionLimit,
    RoundingFailure,
    NonDescent,
    OracleFailure,
    EvalBudget,
    IterBudget,
}

impl TerminalCause {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminalCause::GradTol => "grad_tol",
            TerminalCause::UnboundedFloor => "unbounded_floor",
            TerminalCause::ExpansionLimit => "expansion_limit",
            TerminalCause::BisectionLimit => "bisection_limit",
            TerminalCause::RoundingFailure => "rounding_failure",
            TerminalCause::NonDescent => "non_descent",
            TerminalCause::OracleFailure => "oracle_failure",
            TerminalCause::EvalBudget => "eval_budget",
            TerminalCause::IterBudget => "iter_budget",
        }
    }

    pub fn is_line_search_failure(&self) -> bool {
        matches!(
            self,
            TerminalCause::BisectionLimit
                | TerminalCause::RoundingFailure
                | TerminalCause::NonDescent
                | TerminalCause::OracleFailure
        )
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, TerminalCause::EvalBudget | TerminalCause::IterBudget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyParams {
    pub grad_tol: f64,
    pub f_star: Option<f64>,
    pub f_rel_tol: f64,
    pub unbounded_floor: f64,
}

const STALL_WINDOW: usize = 100;
const STALL_TOL: f64 = 1e-12;

/// Maps a finished trace and its terminal cause to a [`RunStatus`].
///
/// Rules apply in order: converged, unbounded, breakdown, stalled, budget.
/// `f` means the lowest value in the trace; `‖g‖` is taken at the last iterate.
pub fn classify_run(trace: &[TraceRow], cause: TerminalCause, p: &ClassifyParams) -> RunStatus {
    assert!(!trace.is_empty(), "cannot classify an empty trace");
    let f_best = trace.iter().map(|r| r.f).fold(f64::INFINITY, f64::min);
    let last_iterate = trace
        .iter()
        .rev()
        .find(|r| r.note == TraceNote::Iterate)
        .unwrap_or(&trace[0]);

    let near_optimal = p
        .f_star
        .is_some_and(|fs| (f_best - fs).abs() <= p.f_rel_tol * fs.abs().max(1.0));
    if cause == TerminalCause::GradTol || last_iterate.gnorm <= p.grad_tol || near_optimal {
        return RunStatus::Converged;
    }
    if cause == TerminalCause::UnboundedFloor
        || cause == TerminalCause::ExpansionLimit
        || f_best < p.unbounded_floor
    {
        return RunStatus::UnboundedDetected;
    }
    if cause.is_line_search_failure() {
        return RunStatus::Breakdown;
    }
    if has_flat_tail(trace) {
        RunStatus::Stalled
    } else {
        RunStatus::BudgetExhausted
    }
}

fn has_flat_tail(trace: &[TraceRow]) -> bool {
    let tail: Vec<f64> = trace
        .iter()
        .rev()
        .filter(|r| r.note == TraceNote::Iterate)
        .take(STALL_WINDOW)
        .map(|r| r.f)
        .collect();
    if tail.len() < STALL_WINDOW {
        return false;
    }
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo < STALL_TOL * tail[0].abs().max(1.0)
}
