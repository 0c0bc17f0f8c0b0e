use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Matrix, Objective, OracleError, OracleResponse, Vector};

use super::eig::{asymmetry, EigDecomp};
use super::{matrix_from_rows, matrix_to_rows, ProblemError};

const SYMMETRY_TOL: f64 = 1e-14;

/// `f(y) = λ_max(C − Σ yᵢ Aᵢ)` over `y ∈ ℝⁿ` with `C, Aᵢ` symmetric `N × N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEigInstance {
    c: Matrix,
    a: Vec<Matrix>,
}

impl MaxEigInstance {
    pub fn new(c: Matrix, a: Vec<Matrix>) -> Result<Self, ProblemError> {
        let order = c.nrows();
        if c.ncols() != order || order == 0 {
            return Err(ProblemError::Invalid(
                "C must be square and non-empty".into(),
            ));
        }
        if a.is_empty() {
            return Err(ProblemError::Invalid("need at least one Aᵢ".into()));
        }
        for (i, m) in std::iter::once(&c).chain(a.iter()).enumerate() {
            if m.shape() != (order, order) {
                return Err(ProblemError::Invalid(format!(
                    "matrix {i} has shape {:?}, expected {order}×{order}",
                    m.shape()
                )));
            }
            let asym = asymmetry(m);
            if asym > SYMMETRY_TOL {
                return Err(ProblemError::NotSymmetric { index: i, asym });
            }
        }
        Ok(Self { c, a })
    }

    /// Matrix order `N`.
    pub fn order(&self) -> usize {
        self.c.nrows()
    }

    /// Number of variables `n`.
    pub fn nvars(&self) -> usize {
        self.a.len()
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn a(&self) -> &[Matrix] {
        &self.a
    }

    /// `𝒜ᵀy = Σ yᵢ Aᵢ`.
    pub fn adjoint(&self, y: &Vector) -> Matrix {
        let mut out = Matrix::zeros(self.order(), self.order());
        for (ai, &yi) in self.a.iter().zip(y.iter()) {
            out += ai * yi;
        }
        out
    }

    /// `𝒜X = (⟨A₁, X⟩, …, ⟨Aₙ, X⟩)`.
    pub fn apply(&self, x: &Matrix) -> Vector {
        Vector::from_iterator(self.nvars(), self.a.iter().map(|ai| ai.dot(x)))
    }

    /// `W(y) = C − 𝒜ᵀy`.
    pub fn w(&self, y: &Vector) -> Matrix {
        &self.c - self.adjoint(y)
    }

    /// `(−q₁ᵀAⱼq₁, …)` for a unit vector `q`, i.e. `−𝒜(qqᵀ)` without forming
    /// the outer product.
    pub(crate) fn neg_quad_forms(&self, q: &Vector) -> Vector {
        Vector::from_iterator(self.nvars(), self.a.iter().map(|ai| -q.dot(&(ai * q))))
    }
}

pub fn eval_max_eig(inst: &MaxEigInstance, y: &Vector) -> Result<OracleResponse, OracleError> {
    let eig = EigDecomp::new(&inst.w(y))?;
    let q = eig.top_vector();
    Ok(OracleResponse {
        f: eig.lambda_max(),
        g: inst.neg_quad_forms(&q),
    })
}

impl Objective for MaxEigInstance {
    fn dim(&self) -> usize {
        self.nvars()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_max_eig(self, y)
    }
}

fn random_symmetric(rng: &mut ChaCha8Rng, order: usize) -> Matrix {
    let m = Matrix::from_fn(order, order, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&m + m.transpose()) * 0.5
}

/// `C` and each `Aᵢ` get independent standard normal entries, then `(M + Mᵀ)/2`.
pub fn gen_random_max_eig(
    seed: u64,
    order: usize,
    nvars: usize,
) -> Result<MaxEigInstance, ProblemError> {
    if order < 2 || nvars < 1 {
        return Err(ProblemError::Invalid(format!(
            "need N ≥ 2 and n ≥ 1, got N = {order}, n = {nvars}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_symmetric(&mut rng, order);
    let a = (0..nvars)
        .map(|_| random_symmetric(&mut rng, order))
        .collect();
    MaxEigInstance::new(c, a)
}

/// On-disk JSON form: matrices as arrays of rows.
#[derive(Serialize, Deserialize)]
struct MaxEigFile {
    c: Vec<Vec<f64>>,
    a: Vec<Vec<Vec<f64>>>,
}

impl Serialize for MaxEigInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MaxEigFile {
            c: matrix_to_rows(&self.c),
            a: self.a.iter().map(matrix_to_rows).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MaxEigInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = MaxEigFile::deserialize(d)?;
        let c = matrix_from_rows(&file.c).map_err(serde::de::Error::custom)?;
        let a = file
            .a
            .iter()
            .map(|m| matrix_from_rows(m))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        MaxEigInstance::new(c, a).map_err(serde::de::Error::custom)
    }
}
