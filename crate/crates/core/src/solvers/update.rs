use std::collections::VecDeque;

use crate::{Matrix, Vector};

use super::SolverError;

/// A step `s = x₊ − x`, gradient change `y = ∇f(x₊) − ∇f(x)` and `ρ = 1/(sᵀy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair {
    s: Vector,
    y: Vector,
    rho: f64,
}

impl CurvaturePair {
    /// Builds a pair, rejecting `sᵀy ≤ 0` (and anything non-finite).
    pub fn new(s: Vector, y: Vector) -> Result<Self, SolverError> {
        let sy = s.dot(&y);
        let rho = 1.0 / sy;
        if sy > 0.0 && rho.is_finite() && rho > 0.0 {
            Ok(Self { s, y, rho })
        } else {
            Err(SolverError::Curvature { sy })
        }
    }

    pub fn s(&self) -> &Vector {
        &self.s
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Barzilai-Borwein scale `sᵀy / yᵀy`.
    pub fn bb_scale(&self) -> f64 {
        1.0 / (self.rho * self.y.norm_squared())
    }
}

/// `H₊ = (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`.
///
/// Expanded to `H − ρ(s hᵀ + h sᵀ) + (ρ² yᵀh + ρ) s sᵀ` with `h = H y`, which
/// is O(n²).
pub fn bfgs_update(h: &Matrix, pair: &CurvaturePair) -> Matrix {
    let CurvaturePair { s, y, rho } = pair;
    let hy = h * y;
    let yhy = y.dot(&hy);
    let mut out = h.clone();
    out.ger(-rho, s, &hy, 1.0);
    out.ger(-rho, &hy, s, 1.0);
    out.ger(rho * rho * yhy + rho, s, s, 1.0);
    out
}

/// The `m` most recent curvature pairs, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryBuffer {
    pairs: VecDeque<CurvaturePair>,
    m: usize,
}

impl MemoryBuffer {
    pub fn new(m: usize) -> Self {
        Self {
            pairs: VecDeque::with_capacity(m),
            m,
        }
    }

    pub fn capacity(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Appends a pair, evicting the oldest once `m` pairs are held.
    pub fn push(&mut self, pair: CurvaturePair) {
        if self.m == 0 {
            return;
        }
        if self.pairs.len() == self.m {
            self.pairs.pop_front();
        }
        self.pairs.push_back(pair);
    }

    pub fn newest(&self) -> Option<&CurvaturePair> {
        self.pairs.back()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &CurvaturePair> + ExactSizeIterator {
        self.pairs.iter()
    }

    pub fn clear(&mut self) {
        self.pairs.clear();
    }
}

/// `d = −H g` for the L-BFGS matrix defined by the stored pairs.
///
/// `H₀ = (sᵀy / yᵀy) I` from the newest pair when `scaled` and the memory is
/// non-empty, otherwise `H₀ = I`.
pub fn two_loop_direction(mem: &MemoryBuffer, g: &Vector, scaled: bool) -> Vector {
    let mut q = g.clone();
    let mut alphas = Vec::with_capacity(mem.len());
    for pair in mem.iter().rev() {
        let a = pair.rho * pair.s.dot(&q);
        q.axpy(-a, &pair.y, 1.0);
        alphas.push(a);
    }

    let gamma = match mem.newest() {
        Some(p) if scaled => p.bb_scale(),
        _ => 1.0,
    };
    let mut r = q * gamma;

    for (pair, a) in mem.iter().zip(alphas.iter().rev()) {
        let b = pair.rho * pair.y.dot(&r);
        r.axpy(a - b, &pair.s, 1.0);
    }
    -r
}

/// One subgradient step `x − g / k` (k ≥ 1).
pub fn subgradient_step(x: &Vector, g: &Vector, k: usize) -> Vector {
    assert!(k >= 1, "subgradient iteration index starts at 1");
    x - g / (k as f64)
}
