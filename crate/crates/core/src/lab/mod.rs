//! Experiment harness: JSON configs, shared starting points, method races,
//! parameter sweeps, CSV output and dual-slack spectra.
//!
//! Output is deterministic for a fixed config: the same seed gives the same
//! bytes in every CSV, whatever the thread count.

mod config;
mod experiment;
mod gen;
mod io;
mod spectrum;
mod sweep;
mod theorem;

pub use config::{BuiltProblem, ExperimentConfig, GraphSpec, ProblemSpec, StartSpec};
pub use experiment::{
    relative_error, run_experiment, vector_hash, write_outputs, write_summary, ExperimentResult,
    OutputFiles, SUMMARY_HEADER,
};
pub use gen::gen_random_graph;
pub use io::{fmt_f64, read_vector, write_trace, write_vector, TRACE_HEADER};
pub use spectrum::{spectrum_report, DualInstance, SpectrumReport};
pub use sweep::{sweep, write_sweep, SweepCell, SweepConfig, SweepGrid, SweepPoint};
pub use theorem::{check_gradient_failure, check_thm1_failure};

use thiserror::Error;

use crate::linesearch::LineSearchError;
use crate::problems::ProblemError;
use crate::solvers::SolverError;
use crate::OracleError;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<LineSearchError> for LabError {
    fn from(e: LineSearchError) -> Self {
        LabError::Config(e.to_string())
    }
}
