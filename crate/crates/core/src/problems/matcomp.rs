use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Matrix, Objective, OracleError, OracleResponse, Vector};

use super::eig::EigDecomp;
use super::{matrix_from_rows, matrix_to_rows, ProblemError};

/// Exact-penalty dual of nuclear-norm matrix completion,
/// `f(y) = bᵀy + α max{λ_max(−Z(y)), 0}` with
///
/// ```text
/// Z(y) = [ I_{N1}      s·𝓑ᵀ(y) ]
///        [ s·𝓑ᵀ(y)ᵀ   I_{N2}   ]
/// ```
///
/// where `𝓑ᵀ(y)` places `y_k` at the k-th observed position `(i_k, j_k)`.
/// The off-diagonal scale is `s = 1/2` by default, which makes `Z` the dual
/// slack of the symmetric constraint `⟨A_k, X⟩ = U_{i_k j_k}`; `s = 1` is
/// available through [`MatCompInstance::with_offdiag_scale`].
///
/// Indices in `omega` are 0-based and kept in row-major order, which fixes
/// the meaning of `y_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatCompInstance {
    n1: usize,
    n2: usize,
    omega: Vec<(usize, usize)>,
    b: Vec<f64>,
    alpha: f64,
    #[serde(default = "default_offdiag_scale")]
    offdiag_scale: f64,
}

fn default_offdiag_scale() -> f64 {
    0.5
}

impl MatCompInstance {
    pub fn new(
        n1: usize,
        n2: usize,
        omega: Vec<(usize, usize)>,
        b: Vec<f64>,
        alpha: f64,
    ) -> Result<Self, ProblemError> {
        Self::with_offdiag_scale(n1, n2, omega, b, alpha, default_offdiag_scale())
    }

    pub fn with_offdiag_scale(
        n1: usize,
        n2: usize,
        omega: Vec<(usize, usize)>,
        b: Vec<f64>,
        alpha: f64,
        offdiag_scale: f64,
    ) -> Result<Self, ProblemError> {
        let inst = Self {
            n1,
            n2,
            omega,
            b,
            alpha,
            offdiag_scale,
        };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), ProblemError> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(ProblemError::Invalid("N1 and N2 must be positive".into()));
        }
        if self.omega.is_empty() {
            return Err(ProblemError::EmptyOmega);
        }
        if self.omega.len() != self.b.len() {
            return Err(ProblemError::Invalid(format!(
                "|Ω| = {} but b has {} entries",
                self.omega.len(),
                self.b.len()
            )));
        }
        for &(i, j) in &self.omega {
            if i >= self.n1 || j >= self.n2 {
                return Err(ProblemError::Invalid(format!(
                    "observed index ({i}, {j}) outside {}×{}",
                    self.n1, self.n2
                )));
            }
        }
        if !self.omega.windows(2).all(|w| w[0] < w[1]) {
            return Err(ProblemError::Invalid(
                "Ω must be distinct and in row-major order".into(),
            ));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(ProblemError::Invalid(format!(
                "α = {} must be ≥ 0",
                self.alpha
            )));
        }
        if !(self.offdiag_scale > 0.0) {
            return Err(ProblemError::Invalid(
                "off-diagonal scale must be positive".into(),
            ));
        }
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(ProblemError::Invalid("b must be finite".into()));
        }
        Ok(())
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// `N1 + N2`.
    pub fn order(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn nobs(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[(usize, usize)] {
        &self.omega
    }

    pub fn b(&self) -> Vector {
        Vector::from_column_slice(&self.b)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn offdiag_scale(&self) -> f64 {
        self.offdiag_scale
    }

    /// Dual slack `Z(y)`.
    pub fn slack(&self, y: &Vector) -> Matrix {
        let mut z = Matrix::identity(self.order(), self.order());
        for (&(i, j), &yk) in self.omega.iter().zip(y.iter()) {
            let v = self.offdiag_scale * yk;
            z[(i, self.n1 + j)] = v;
            z[(self.n1 + j, i)] = v;
        }
        z
    }

    /// `∂λ/∂y_k` for an eigenpair of `−Z(y)` with unit eigenvector `q`.
    pub(crate) fn eigen_gradient(&self, q: &Vector) -> Vector {
        let c = -2.0 * self.offdiag_scale;
        Vector::from_iterator(
            self.nobs(),
            self.omega.iter().map(|&(i, j)| c * q[i] * q[self.n1 + j]),
        )
    }
}

pub fn eval_matcomp_penalty(
    inst: &MatCompInstance,
    y: &Vector,
) -> Result<OracleResponse, OracleError> {
    let eig = EigDecomp::new(&-inst.slack(y))?;
    let lmax = eig.lambda_max();
    let b = inst.b();
    let mut g = b.clone();
    if lmax > 0.0 {
        g += inst.eigen_gradient(&eig.top_vector()) * inst.alpha;
    }
    Ok(OracleResponse {
        f: b.dot(y) + inst.alpha * lmax.max(0.0),
        g,
    })
}

impl Objective for MatCompInstance {
    fn dim(&self) -> usize {
        self.nobs()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_matcomp_penalty(self, y)
    }
}

/// A random low-rank matrix and the observed sample of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMatComp {
    pub n1: usize,
    pub n2: usize,
    pub omega: Vec<(usize, usize)>,
    pub b: Vec<f64>,
    /// Ground truth `G₁G₂ᵀ`.
    pub truth: Matrix,
}

impl GeneratedMatComp {
    pub fn into_instance(self, alpha: f64) -> Result<MatCompInstance, ProblemError> {
        MatCompInstance::new(self.n1, self.n2, self.omega, self.b, alpha)
    }
}

/// `𝒳 = G₁G₂ᵀ` with standard normal `N1×r` and `N2×r` factors; each entry is
/// observed independently with probability `p_obs`.
pub fn gen_random_matcomp(
    seed: u64,
    n1: usize,
    n2: usize,
    rank: usize,
    p_obs: f64,
) -> Result<GeneratedMatComp, ProblemError> {
    if rank < 1 || rank > n1.min(n2) {
        return Err(ProblemError::Invalid(format!(
            "rank {rank} must lie in 1..={}",
            n1.min(n2)
        )));
    }
    if !(p_obs > 0.0 && p_obs <= 1.0) {
        return Err(ProblemError::Invalid(format!(
            "p_obs = {p_obs} must lie in (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g1 = Matrix::from_fn(n1, rank, |_, _| rng.sample::<f64, _>(StandardNormal));
    let g2 = Matrix::from_fn(n2, rank, |_, _| rng.sample::<f64, _>(StandardNormal));
    let truth = &g1 * g2.transpose();

    // Separate stream for the mask so the factors do not depend on p_obs.
    let mut mask_rng = ChaCha8Rng::seed_from_u64(seed);
    mask_rng.set_stream(1);
    let mut omega = Vec::new();
    let mut b = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            if mask_rng.random::<f64>() < p_obs {
                omega.push((i, j));
                b.push(truth[(i, j)]);
            }
        }
    }
    if omega.is_empty() {
        return Err(ProblemError::EmptyOmega);
    }
    Ok(GeneratedMatComp {
        n1,
        n2,
        omega,
        b,
        truth,
    })
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GeneratedMatCompFile {
    pub n1: usize,
    pub n2: usize,
    pub omega: Vec<(usize, usize)>,
    pub b: Vec<f64>,
    pub truth: Vec<Vec<f64>>,
}

impl Serialize for GeneratedMatComp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GeneratedMatCompFile {
            n1: self.n1,
            n2: self.n2,
            omega: self.omega.clone(),
            b: self.b.clone(),
            truth: matrix_to_rows(&self.truth),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratedMatComp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = GeneratedMatCompFile::deserialize(d)?;
        Ok(Self {
            n1: f.n1,
            n2: f.n2,
            omega: f.omega,
            b: f.b,
            truth: matrix_from_rows(&f.truth).map_err(serde::de::Error::custom)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(alpha: f64) -> MatCompInstance {
        MatCompInstance::new(1, 1, vec![(0, 0)], vec![1.0], alpha).unwrap()
    }

    #[test]
    fn zero_dual_gives_b() {
        let g = gen_random_matcomp(3, 4, 5, 2, 0.5)
            .unwrap()
            .into_instance(2.0)
            .unwrap();
        let r = g.eval(&Vector::zeros(g.nobs())).unwrap();
        assert_eq!(r.f, 0.0);
        assert_eq!(r.g, g.b());
    }

    #[test]
    fn single_entry_profile() {
        let inst = single(2.0);
        // f(y) = y for |y| ≤ 2 and −2 on y ≤ −2.
        for (y, want) in [
            (1.0, 1.0),
            (-1.0, -1.0),
            (-2.0, -2.0),
            (-5.0, -2.0),
            (3.0, 4.0),
        ] {
            let r = inst.eval(&Vector::from_element(1, y)).unwrap();
            assert!((r.f - want).abs() < 1e-14, "y = {y}: f = {}", r.f);
        }
        let r = inst.eval(&Vector::from_element(1, -5.0)).unwrap();
        assert!(r.g[0].abs() < 1e-14);
    }

    #[test]
    fn printed_scale_halves_the_optimum() {
        let inst =
            MatCompInstance::with_offdiag_scale(1, 1, vec![(0, 0)], vec![1.0], 2.0, 1.0).unwrap();
        let r = inst.eval(&Vector::from_element(1, -1.0)).unwrap();
        assert!((r.f + 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_observation() {
        let g = gen_random_matcomp(1, 3, 4, 2, 1.0).unwrap();
        assert_eq!(g.omega.len(), 12);
        assert_eq!(g.b[5], g.truth[(1, 1)]);
    }

    #[test]
    fn truth_has_requested_rank() {
        let g = gen_random_matcomp(8, 12, 9, 3, 0.3).unwrap();
        let sv = g.truth.clone().singular_values();
        let mut sv: Vec<f64> = sv.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        assert!(sv[2] > 1e-6 * sv[0]);
        assert!(sv[3] <= 1e-10 * sv[0]);
    }

    #[test]
    fn generator_validation() {
        assert!(gen_random_matcomp(0, 3, 3, 0, 0.5).is_err());
        assert!(gen_random_matcomp(0, 3, 3, 4, 0.5).is_err());
        assert!(gen_random_matcomp(0, 3, 3, 1, 0.0).is_err());
        assert!(gen_random_matcomp(0, 3, 3, 1, 1.5).is_err());
        // Tiny p on a 1×1 grid almost surely observes nothing.
        assert!(matches!(
            gen_random_matcomp(0, 1, 1, 1, 1e-12),
            Err(ProblemError::EmptyOmega)
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(MatCompInstance::new(2, 2, vec![(0, 1), (0, 0)], vec![1.0, 2.0], 1.0).is_err());
        assert!(MatCompInstance::new(2, 2, vec![(0, 2)], vec![1.0], 1.0).is_err());
        assert!(MatCompInstance::new(2, 2, vec![(0, 1)], vec![1.0, 2.0], 1.0).is_err());
        assert!(MatCompInstance::new(2, 2, vec![], vec![], 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = gen_random_matcomp(4, 3, 5, 1, 0.6).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: GeneratedMatComp = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        let inst = g.into_instance(3.0).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        let back: MatCompInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(inst, back);
    }
}
