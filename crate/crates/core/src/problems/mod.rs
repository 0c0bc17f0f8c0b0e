//! Nonsmooth test objectives and seeded instance generators.
//!
//! Every oracle follows the same tie-breaking rule: among equal maximizing
//! terms the lowest index wins, and `sign(0) = +1`. Eigenvalue-based oracles
//! take the first eigenvector returned for the largest eigenvalue.

mod abs_linear;
mod eig;
mod les_houches;
mod matcomp;
mod max_eig;
mod maxcut;

pub use abs_linear::{eval_abs_linear, AbsLinearProblem};
pub use eig::{asymmetry, EigDecomp, EIG_RESIDUAL_TOL};
pub(crate) use les_houches::term as les_houches_term;
pub use les_houches::{
    eval_les_houches, gen_les_houches_witness, LesHouchesProblem, WITNESS_MAX_N,
};
pub use matcomp::{eval_matcomp_penalty, gen_random_matcomp, GeneratedMatComp, MatCompInstance};
pub use max_eig::{eval_max_eig, gen_random_max_eig, MaxEigInstance};
pub use maxcut::{
    complete_graph, cycle_graph, eval_maxcut_penalty, laplacian_from_edges, parse_gset, write_gset,
    Edge, Laplacian, MaxCutInstance,
};

use thiserror::Error;

use crate::Matrix;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("invalid problem parameter: {0}")]
    Invalid(String),
    #[error("matrix {index} is not symmetric (relative asymmetry {asym:e})")]
    NotSymmetric { index: usize, asym: f64 },
    #[error("edge ({i}, {j}) out of range for {n} vertices")]
    OutOfRange { i: usize, j: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("no entries observed; reseed the generator")]
    EmptyOmega,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `sign` with `sign(0) = +1`.
#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix, String> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err("ragged matrix rows".into());
    }
    Ok(Matrix::from_fn(nr, nc, |i, j| rows[i][j]))
}
