use nalgebra::SymmetricEigen;

use crate::{Matrix, OracleError, Vector};

/// Residual bound relative to `max(1, ‖W‖_F)`.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

/// Full eigendecomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    /// `λ₁ ≥ λ₂ ≥ … ≥ λ_N`.
    pub lambdas: Vector,
    /// Orthonormal eigenvectors as columns, in the order of `lambdas`.
    pub q: Matrix,
}

impl EigDecomp {
    /// Decomposes `w` (only its symmetric part is meaningful) and checks the
    /// residual `‖WQ − QΛ‖_F`.
    pub fn new(w: &Matrix) -> Result<Self, OracleError> {
        let n = w.nrows();
        let raw = SymmetricEigen::new(w.clone());
        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort keeps the solver's order among exact ties.
        order.sort_by(|&a, &b| raw.eigenvalues[b].total_cmp(&raw.eigenvalues[a]));
        let lambdas = Vector::from_iterator(n, order.iter().map(|&i| raw.eigenvalues[i]));
        let q = Matrix::from_fn(n, n, |r, c| raw.eigenvectors[(r, order[c])]);

        let residual = (w * &q - &q * Matrix::from_diagonal(&lambdas)).norm();
        let tolerance = EIG_RESIDUAL_TOL * w.norm().max(1.0);
        if !(residual <= tolerance) {
            return Err(OracleError::Eigen {
                residual,
                tolerance,
            });
        }
        Ok(Self { lambdas, q })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambdas[0]
    }

    /// Eigenvector for `λ_max` (first column on ties).
    pub fn top_vector(&self) -> Vector {
        self.q.column(0).into_owned()
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn smallest(&self, k: usize) -> Vec<f64> {
        self.lambdas.iter().rev().take(k).copied().collect()
    }
}

/// Frobenius-relative asymmetry `‖M − Mᵀ‖ / max(1, ‖M‖)`.
pub fn asymmetry(m: &Matrix) -> f64 {
    (m - m.transpose()).norm() / m.norm().max(1.0)
}
