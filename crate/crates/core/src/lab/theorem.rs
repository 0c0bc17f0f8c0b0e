//! Failure predicates for `f(x) = a|x₁| + Σᵢ₌₂ⁿ xᵢ`.
//!
//! Both predicates say when a method with an Armijo-Wolfe line search is
//! guaranteed to stall on this unbounded function instead of following the
//! ray along which `f → −∞`.

/// Sufficient condition for scaled L-BFGS-1 to fail:
/// `((1 − c1)/c1)(n − 1) < a² + a√(a² − 3(n − 1))`.
///
/// The result only holds for `a ≥ 2√(n − 1)`; below that this logs a warning
/// and returns `false`.
pub fn check_thm1_failure(a: f64, n: usize, c1: f64) -> bool {
    let m = n.saturating_sub(1) as f64;
    if a < 2.0 * m.sqrt() {
        log::warn!("a = {a} < 2√(n−1) = {}: hypothesis unmet", 2.0 * m.sqrt());
        return false;
    }
    (1.0 - c1) / c1 * m < a * a + a * (a * a - 3.0 * m).sqrt()
}

/// Sufficient condition for the gradient method to fail:
/// `((1 − c1)/c1)(n − 1) < a²`.
pub fn check_gradient_failure(a: f64, n: usize, c1: f64) -> bool {
    let m = n.saturating_sub(1) as f64;
    (1.0 - c1) / c1 * m < a * a
}
