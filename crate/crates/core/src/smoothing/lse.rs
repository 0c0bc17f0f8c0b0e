use crate::problems::ProblemError;
use crate::Vector;

use super::SmoothingParams;

/// Result of [`logsumexp_sym`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymLse {
    pub value: f64,
    /// `e^{yᵢ/μ} / Σ`.
    pub w_plus: Vector,
    /// `e^{−yᵢ/μ} / Σ`.
    pub w_minus: Vector,
}

impl SymLse {
    /// Gradient of the smoothed value with respect to `y`.
    pub fn gradient(&self) -> Vector {
        &self.w_plus - &self.w_minus
    }
}

/// `μ log Σᵢ (e^{yᵢ/μ} + e^{−yᵢ/μ}) − μ log(2n)`, a smooth stand-in for
/// `max |yᵢ|` that never exceeds it and undershoots by at most `μ log(2n)`.
///
/// Exponents are shifted by `max |yᵢ| / μ`, so the sum is at least 1 and no
/// term overflows.
pub fn logsumexp_sym(y: &Vector, mu: f64) -> Result<SymLse, ProblemError> {
    let params = SmoothingParams::new(mu)?;
    Ok(logsumexp_sym_with(y, &params))
}

pub(crate) fn logsumexp_sym_with(y: &Vector, params: &SmoothingParams) -> SymLse {
    let mu = params.mu();
    let n = y.len();
    let shift = y.amax();
    let w_plus = y.map(|v| ((v - shift) / mu).exp());
    let w_minus = y.map(|v| ((-v - shift) / mu).exp());
    let total = w_plus.sum() + w_minus.sum();
    SymLse {
        value: shift + mu * (total / (2 * n) as f64).ln(),
        w_plus: w_plus / total,
        w_minus: w_minus / total,
    }
}

/// Shifted log-sum-exp over `λ` with an optional extra zero term:
/// `μ log(z + Σ e^{λᵢ/μ})` where `z ∈ {0, 1}` stands for `e^{0/μ}`.
///
/// Returns the value and the weights on the `λᵢ` (the zero term's weight is
/// `1 − Σ wᵢ`).
pub(crate) fn logsumexp_spectrum(lambdas: &Vector, mu: f64, zero_term: bool) -> (f64, Vector) {
    let mut shift = lambdas.max();
    if zero_term {
        shift = shift.max(0.0);
    }
    let mut w = lambdas.map(|l| ((l - shift) / mu).exp());
    let zero = if zero_term { (-shift / mu).exp() } else { 0.0 };
    let total = w.sum() + zero;
    w /= total;
    (shift + mu * total.ln(), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_input_gives_zero() {
        for n in [1, 3, 10] {
            for mu in [1.0, 1e-3, 1e-16] {
                let r = logsumexp_sym(&Vector::zeros(n), mu).unwrap();
                assert_eq!(r.value, 0.0);
                assert_eq!(r.gradient(), Vector::zeros(n));
            }
        }
    }

    #[test]
    fn dominant_term_expansion() {
        let mu = 0.01;
        let t = 50.0 * mu;
        let y = Vector::from_column_slice(&[t, 0.0, 0.0, 0.0]);
        let r = logsumexp_sym(&y, mu).unwrap();
        let want = t - mu * 8f64.ln() + mu * (1.0 + 7.0 * (-50f64).exp() + (-100f64).exp()).ln();
        assert!((r.value - want).abs() < 1e-12);
        assert!((r.value - (t - mu * 8f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn sandwich_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(1..20);
            let mu = 10f64.powf(rng.random_range(-6.0..0.0));
            let y = Vector::from_fn(n, |_, _| rng.random_range(-3.0..3.0));
            let r = logsumexp_sym(&y, mu).unwrap();
            let g = y.amax();
            let slack = 1e-12 * g.max(1.0);
            assert!(r.value <= g + slack);
            assert!(r.value >= g - mu * (2.0 * n as f64).ln() - slack);
            let total = r.w_plus.sum() + r.w_minus.sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(r.w_plus.iter().chain(r.w_minus.iter()).all(|&w| w >= 0.0));
        }
    }

    #[test]
    fn rejects_bad_mu() {
        let y = Vector::zeros(2);
        assert!(logsumexp_sym(&y, 0.0).is_err());
        assert!(logsumexp_sym(&y, -1.0).is_err());
        assert!(logsumexp_sym(&y, f64::NAN).is_err());
        assert!(logsumexp_sym(&y, f64::INFINITY).is_err());
    }

    #[test]
    fn tiny_mu_large_input_is_finite() {
        let y = Vector::from_column_slice(&[1e3, -999.0, 0.5]);
        let r = logsumexp_sym(&y, 1e-16).unwrap();
        assert!(r.value.is_finite());
        assert!((r.value - 1e3).abs() < 1e-10);
    }

    #[test]
    fn spectrum_with_zero_term() {
        let (v, w) = logsumexp_spectrum(&Vector::zeros(3), 0.5, true);
        assert!((v - 0.5 * 4f64.ln()).abs() < 1e-15);
        assert!((w.sum() - 0.75).abs() < 1e-15);
        let (v, w) = logsumexp_spectrum(&Vector::from_column_slice(&[2.0, -1.0]), 1e-3, false);
        assert!((v - 2.0).abs() < 1e-12);
        assert_eq!(w[1], 0.0);
    }
}
