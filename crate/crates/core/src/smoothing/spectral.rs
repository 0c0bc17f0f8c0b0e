//! Smoothings of the eigenvalue objectives.
//!
//! All three gradients go through the weighted projector `G = Σ wᵢ qᵢqᵢᵀ`,
//! which depends only on the eigenspaces and not on the basis chosen inside a
//! degenerate one.

use crate::problems::{EigDecomp, MatCompInstance, MaxCutInstance, MaxEigInstance};
use crate::{Matrix, Objective, OracleError, OracleResponse, Vector};

use super::{logsumexp_spectrum, Smoothed, SmoothingParams};

/// `Σ wᵢ qᵢqᵢᵀ` over the eigenpairs whose weight did not underflow.
fn weighted_projector(eig: &EigDecomp, w: &Vector) -> Matrix {
    let n = eig.dim();
    let mut g = Matrix::zeros(n, n);
    for (i, &wi) in w.iter().enumerate() {
        if wi > 0.0 {
            let q = eig.q.column(i);
            g.ger(wi, &q, &q, 1.0);
        }
    }
    g
}

/// `f_μ(y) = μ log Σᵢ e^{λᵢ(W)/μ} − μ log N` with `W = C − 𝒜ᵀy`.
pub fn eval_smoothed_max_eig(
    inst: &MaxEigInstance,
    params: &SmoothingParams,
    y: &Vector,
) -> Result<OracleResponse, OracleError> {
    let mu = params.mu();
    let eig = EigDecomp::new(&inst.w(y))?;
    let (lse, w) = logsumexp_spectrum(&eig.lambdas, mu, false);
    let proj = weighted_projector(&eig, &w);
    Ok(OracleResponse {
        f: lse - mu * (inst.order() as f64).ln(),
        g: -inst.apply(&proj),
    })
}

/// `f_μ(y) = 𝟏ᵀy + αμ log(1 + Σᵢ e^{λᵢ(M)/μ}) − αμ log(N + 1)`.
pub fn eval_smoothed_maxcut(
    inst: &MaxCutInstance,
    params: &SmoothingParams,
    y: &Vector,
) -> Result<OracleResponse, OracleError> {
    let mu = params.mu();
    let alpha = inst.alpha();
    let n = inst.order();
    let eig = EigDecomp::new(&inst.m(y))?;
    let (lse, w) = logsumexp_spectrum(&eig.lambdas, mu, true);
    let proj = weighted_projector(&eig, &w);
    Ok(OracleResponse {
        f: y.sum() + alpha * (lse - mu * ((n + 1) as f64).ln()),
        g: Vector::from_fn(n, |i, _| 1.0 - alpha * proj[(i, i)]),
    })
}

/// `f_μ(y) = bᵀy + αμ log(1 + Σᵢ e^{λᵢ(−Z)/μ}) − αμ log(N1 + N2 + 1)`.
pub fn eval_smoothed_matcomp(
    inst: &MatCompInstance,
    params: &SmoothingParams,
    y: &Vector,
) -> Result<OracleResponse, OracleError> {
    let mu = params.mu();
    let alpha = inst.alpha();
    let eig = EigDecomp::new(&-inst.slack(y))?;
    let (lse, w) = logsumexp_spectrum(&eig.lambdas, mu, true);
    let proj = weighted_projector(&eig, &w);
    let b = inst.b();
    let c = -2.0 * inst.offdiag_scale() * alpha;
    let n1 = inst.n1();
    let g = Vector::from_iterator(
        inst.nobs(),
        inst.omega()
            .iter()
            .zip(b.iter())
            .map(|(&(i, j), &bk)| bk + c * proj[(i, n1 + j)]),
    );
    Ok(OracleResponse {
        f: b.dot(y) + alpha * (lse - mu * ((inst.order() + 1) as f64).ln()),
        g,
    })
}

impl Objective for Smoothed<MaxEigInstance> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_smoothed_max_eig(&self.problem, &self.params, y)
    }
}

impl Objective for Smoothed<MaxCutInstance> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_smoothed_maxcut(&self.problem, &self.params, y)
    }
}

impl Objective for Smoothed<MatCompInstance> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_smoothed_matcomp(&self.problem, &self.params, y)
    }
}
