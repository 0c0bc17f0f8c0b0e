use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::problems::{Edge, ProblemError};

/// Erdős–Rényi `G(n, p)` with unit weights and 1-based endpoints.
pub fn gen_random_graph(seed: u64, n: usize, p: f64) -> Result<Vec<Edge>, ProblemError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ProblemError::Invalid(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_and_determinism() {
        assert!(gen_random_graph(1, 10, 0.0).unwrap().is_empty());
        assert_eq!(gen_random_graph(1, 10, 1.0).unwrap().len(), 45);
        assert_eq!(
            gen_random_graph(5, 30, 0.3).unwrap(),
            gen_random_graph(5, 30, 0.3).unwrap()
        );
        assert!(gen_random_graph(1, 3, 1.5).is_err());
    }
}
