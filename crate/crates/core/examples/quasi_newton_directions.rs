//! The L-BFGS two-loop recursion against explicit BFGS updates.
//!
//! With the same stored pairs and the same initial matrix, the two-loop
//! direction equals `−Hg` for the explicitly updated `H`.

use nslab::solvers::{bfgs_update, two_loop_direction, CurvaturePair, MemoryBuffer};
use nslab::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mem = MemoryBuffer::new(3);
    for _ in 0..3 {
        let s = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        // y = Bs for an SPD B keeps sᵀy > 0.
        let b = Matrix::from_diagonal(&Vector::from_fn(n, |i, _| 1.0 + i as f64));
        let y = &b * &s;
        mem.push(CurvaturePair::new(s, y).unwrap());
    }
    let g = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));

    for scaled in [false, true] {
        let gamma = if scaled {
            mem.newest().unwrap().bb_scale()
        } else {
            1.0
        };
        let mut h = Matrix::identity(n, n) * gamma;
        for pair in mem.iter() {
            h = bfgs_update(&h, pair);
        }
        let explicit = -(&h * &g);
        let implicit = two_loop_direction(&mem, &g, scaled);
        println!(
            "scaled = {scaled:5}: relative difference {:.2e}",
            (&explicit - &implicit).norm() / explicit.norm()
        );
    }
}
