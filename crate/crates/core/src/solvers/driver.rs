use std::time::Instant;

use crate::linesearch::{bracketing_search_with, LineSearchError, LineSearchStatus};
use crate::{Matrix, Objective, OracleError, OracleResponse, Vector};

use super::update::{
    bfgs_update, subgradient_step, two_loop_direction, CurvaturePair, MemoryBuffer,
};
use super::{
    classify_run, Method, RunRecord, SolverConfig, SolverError, TerminalCause, TraceNote, TraceRow,
};

/// Why an oracle call was refused or aborted by the tracker.
#[derive(Debug)]
enum Stop {
    EvalBudget,
    Unbounded,
    Oracle,
}

impl Stop {
    fn cause(&self) -> TerminalCause {
        match self {
            Stop::EvalBudget => TerminalCause::EvalBudget,
            Stop::Unbounded => TerminalCause::UnboundedFloor,
            Stop::Oracle => TerminalCause::OracleFailure,
        }
    }
}

/// Wraps the objective: counts calls, enforces the eval budget and the
/// unboundedness floor, and appends one trace row per call.
struct Tracker<'a, P: ?Sized> {
    problem: &'a P,
    max_evals: usize,
    floor: f64,
    trace: Vec<TraceRow>,
    best: Option<(f64, Vector)>,
    note: Option<String>,
}

impl<'a, P: Objective + ?Sized> Tracker<'a, P> {
    fn evals(&self) -> usize {
        self.trace.len()
    }

    fn eval(&mut self, x: &Vector, iter: usize) -> Result<OracleResponse, Stop> {
        if self.evals() >= self.max_evals {
            return Err(Stop::EvalBudget);
        }
        let resp = match self.problem.eval(x) {
            Ok(r) => r,
            Err(e) => {
                // The call happened even though it produced nothing usable.
                self.push_row(iter, f64::NAN, f64::NAN);
                return Err(self.fail(e));
            }
        };
        let gnorm = resp.g.norm();
        self.push_row(iter, resp.f, gnorm);
        if !resp.is_finite() {
            return Err(self.fail(OracleError::NonFinite(format!(
                "f = {}, |g| = {gnorm} at evaluation {}",
                resp.f,
                self.evals()
            ))));
        }
        if self.best.as_ref().is_none_or(|(f, _)| resp.f < *f) {
            self.best = Some((resp.f, x.clone()));
        }
        if resp.f < self.floor {
            return Err(Stop::Unbounded);
        }
        Ok(resp)
    }

    fn push_row(&mut self, iter: usize, f: f64, gnorm: f64) {
        let cum_evals = self.evals() + 1;
        self.trace.push(TraceRow {
            iter,
            cum_evals,
            f,
            gnorm,
            step: 0.0,
            note: TraceNote::LsEval,
        });
    }

    fn fail(&mut self, e: OracleError) -> Stop {
        self.note = Some(e.to_string());
        Stop::Oracle
    }

    fn mark_last_iterate(&mut self, step: f64) {
        if let Some(row) = self.trace.last_mut() {
            row.note = TraceNote::Iterate;
            row.step = step;
        }
    }
}

enum Direction {
    Bfgs(Matrix),
    Lbfgs { mem: MemoryBuffer, scaled: bool },
    Gradient,
}

impl Direction {
    fn new(method: Method, n: usize) -> Option<Self> {
        match method {
            Method::Bfgs => Some(Direction::Bfgs(Matrix::identity(n, n))),
            Method::Lbfgs { m, scaled } => Some(Direction::Lbfgs {
                mem: MemoryBuffer::new(m),
                scaled,
            }),
            Method::Gradient => Some(Direction::Gradient),
            Method::Subgradient => None,
        }
    }

    fn direction(&self, g: &Vector) -> Vector {
        match self {
            Direction::Bfgs(h) => -(h * g),
            Direction::Lbfgs { mem, scaled } => two_loop_direction(mem, g, *scaled),
            Direction::Gradient => -g,
        }
    }

    /// Absorbs a new pair. Pairs with `sᵀy ≤ 0` (possible only through
    /// rounding after a Wolfe step) are skipped.
    fn absorb(&mut self, s: Vector, y: Vector) {
        let Ok(pair) = CurvaturePair::new(s, y) else {
            return;
        };
        match self {
            Direction::Bfgs(h) => {
                let next = bfgs_update(h, &pair);
                if next.iter().all(|v| v.is_finite()) {
                    *h = next;
                }
            }
            Direction::Lbfgs { mem, .. } => mem.push(pair),
            Direction::Gradient => {}
        }
    }
}

/// Runs one method from `x0` until a stopping rule fires.
///
/// Counts every oracle call against `max_evals`, including trials in a line
/// search that the budget cuts short.
pub fn run<P: Objective + ?Sized>(
    problem: &P,
    x0: &Vector,
    cfg: &SolverConfig,
) -> Result<RunRecord, SolverError> {
    cfg.validate()?;
    if x0.len() != problem.dim() {
        return Err(SolverError::Dimension {
            expected: problem.dim(),
            got: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::NonFiniteStart);
    }

    let start = Instant::now();
    let mut tracker = Tracker {
        problem,
        max_evals: cfg.max_evals,
        floor: cfg.unbounded_floor,
        trace: Vec::new(),
        best: None,
        note: None,
    };

    let mut x = x0.clone();
    let mut iterations = 0;
    let cause = match tracker.eval(&x, 0) {
        Err(stop) => stop.cause(),
        Ok(resp) => {
            tracker.mark_last_iterate(0.0);
            match Direction::new(cfg.method, x.len()) {
                Some(dir) => descent_loop(&mut tracker, dir, &mut x, resp, cfg, &mut iterations),
                None => subgradient_loop(&mut tracker, &mut x, resp, cfg, &mut iterations),
            }
        }
    };

    let status = classify_run(&tracker.trace, cause, &cfg.classify_params());
    let (final_f, final_x) = tracker
        .best
        .take()
        .unwrap_or_else(|| (f64::NAN, x0.clone()));
    Ok(RunRecord {
        method: cfg.method,
        status,
        cause,
        final_f,
        final_x,
        last_x: x,
        evals: tracker.evals(),
        trace: tracker.trace,
        iterations,
        seed: cfg.seed,
        wall_seconds: start.elapsed().as_secs_f64(),
        note: tracker.note,
    })
}

fn descent_loop<P: Objective + ?Sized>(
    tracker: &mut Tracker<'_, P>,
    mut dir: Direction,
    x: &mut Vector,
    first: OracleResponse,
    cfg: &SolverConfig,
    iterations: &mut usize,
) -> TerminalCause {
    let OracleResponse { mut f, mut g } = first;
    loop {
        if g.norm() <= cfg.grad_tol {
            return TerminalCause::GradTol;
        }
        if *iterations >= cfg.max_iters {
            return TerminalCause::IterBudget;
        }
        if tracker.evals() >= cfg.max_evals {
            return TerminalCause::EvalBudget;
        }

        let d = dir.direction(&g);
        let next_iter = *iterations + 1;
        let outcome = bracketing_search_with(|z| tracker.eval(z, next_iter), x, &d, f, &g, &cfg.ls);
        let out = match outcome {
            Ok(out) => out,
            Err(LineSearchError::NotDescent { slope }) => {
                tracker.note = Some(format!("search direction not descent: gᵀd = {slope:e}"));
                return TerminalCause::NonDescent;
            }
            Err(LineSearchError::Oracle { source, .. }) => return source.cause(),
            Err(LineSearchError::InvalidParams(_)) => unreachable!("validated in run()"),
        };
        match out.status {
            LineSearchStatus::Accepted => {}
            LineSearchStatus::ExpansionLimit => return TerminalCause::ExpansionLimit,
            LineSearchStatus::BisectionLimit => return TerminalCause::BisectionLimit,
            LineSearchStatus::RoundingFailure => return TerminalCause::RoundingFailure,
        }

        tracker.mark_last_iterate(out.t);
        *iterations = next_iter;
        let s = d * out.t;
        let y = &out.g_new - &g;
        dir.absorb(s, y);
        *x = out.x_new;
        f = out.f_new;
        g = out.g_new;
    }
}

fn subgradient_loop<P: Objective + ?Sized>(
    tracker: &mut Tracker<'_, P>,
    x: &mut Vector,
    first: OracleResponse,
    cfg: &SolverConfig,
    iterations: &mut usize,
) -> TerminalCause {
    let mut g = first.g;
    loop {
        if g.norm() <= cfg.grad_tol {
            return TerminalCause::GradTol;
        }
        if *iterations >= cfg.max_iters {
            return TerminalCause::IterBudget;
        }
        let k = *iterations + 1;
        let x_next = subgradient_step(x, &g, k);
        match tracker.eval(&x_next, k) {
            Ok(resp) => {
                tracker.mark_last_iterate(1.0 / k as f64);
                *iterations = k;
                *x = x_next;
                g = resp.g;
            }
            Err(stop) => return stop.cause(),
        }
    }
}
