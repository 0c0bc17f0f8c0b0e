mod common;

use common::*;
use nslab::problems::{eval_max_eig, EigDecomp, MaxEigInstance};
use nslab::smoothing::{eval_smoothed_max_eig, eval_smoothed_maxcut, SmoothingParams};
use nslab::{Matrix, Objective, Vector};

#[test]
fn nonsmooth_gradients_match_finite_differences() {
    for seed in [1, 2] {
        let mut r = rng(100 + seed);
        for case in nonsmooth_cases(seed) {
            let worst = case.worst_mismatch(&mut r, 20);
            assert!(worst <= 1e-6, "{} (seed {seed}): {worst:e}", case.name);
        }
    }
}

#[test]
fn smoothed_gradients_match_finite_differences() {
    for mu in [1e-1, 1e-2, 1e-3] {
        let mut r = rng(7);
        for case in smoothed_cases(3, mu) {
            let worst = case.worst_mismatch(&mut r, 20);
            assert!(worst <= 1e-6, "{}: {worst:e}", case.name);
        }
    }
}

#[test]
fn max_eig_gradient_is_adjoint_of_top_projector() {
    let inst = max_eig_instance(5);
    let mut r = rng(5);
    for _ in 0..20 {
        let y = normal_vec(&mut r, 5, 1.0);
        let g = eval_max_eig(&inst, &y).unwrap().g;
        let eig = EigDecomp::new(&inst.w(&y)).unwrap();
        let q = eig.top_vector();
        assert!((q.norm() - 1.0).abs() < 1e-12);
        let want = -inst.apply(&(&q * q.transpose()));
        assert!((&g - &want).norm() <= 1e-12 * want.norm().max(1.0));
    }
}

#[test]
fn max_eig_is_positively_homogeneous() {
    let inst = max_eig_instance(6);
    let mut r = rng(6);
    for t in [0.5, 2.0, 10.0] {
        let scaled = MaxEigInstance::new(inst.c() * t, inst.a().to_vec()).unwrap();
        let y = normal_vec(&mut r, 5, 1.0);
        let f = inst.eval(&y).unwrap().f;
        let ft = scaled.eval(&(&y * t)).unwrap().f;
        assert!((ft - t * f).abs() <= 1e-12 * (t * f).abs().max(1.0));
    }
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
fn random_orthogonal(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| normal_vec(r, 1, 1.0)[0]);
    g.qr().q()
}

#[test]
fn smoothed_gradient_is_basis_invariant() {
    // C has a threefold and a twofold eigenvalue (descending: 2, 2, 2, 0.5, −1, −1).
    let mut r = rng(8);
    let n = 6;
    let mu = 0.3;
    let lam = Vector::from_column_slice(&[2.0, 2.0, 2.0, -1.0, -1.0, 0.5]);
    let u = random_orthogonal(&mut r, n);
    let c = &u * Matrix::from_diagonal(&lam) * u.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let a1 = {
        let m = Matrix::from_fn(n, n, |i, j| ((i + 2 * j) as f64).sin());
        (&m + m.transpose()) * 0.5
    };
    let inst = MaxEigInstance::new(c.clone(), vec![a1.clone()]).unwrap();
    let g0 = eval_smoothed_max_eig(&inst, &SmoothingParams::new(mu).unwrap(), &Vector::zeros(1))
        .unwrap()
        .g[0];

    // Rebuild Σ wᵢqᵢqᵢᵀ from randomly rotated bases of each eigenspace.
    let eig = EigDecomp::new(&c).unwrap();
    let w: Vec<f64> = eig
        .lambdas
        .iter()
        .map(|l| ((l - eig.lambdas[0]) / mu).exp())
        .collect();
    let total: f64 = w.iter().sum();
    for _ in 0..5 {
        let mut proj = Matrix::zeros(n, n);
        for grp in [0..3, 3..4, 4..6] {
            let k = grp.len();
            let rotated = eig.q.columns(grp.start, k) * random_orthogonal(&mut r, k);
            for j in 0..k {
                let q = rotated.column(j);
                proj += (q * q.transpose()) * (w[grp.start + j] / total);
            }
        }
        let g = -a1.dot(&proj);
        assert!((g - g0).abs() <= 1e-10, "{g} vs {g0}");
    }
}

#[test]
fn smoothed_maxcut_sandwich() {
    let inst = maxcut_instance(4);
    let mut r = rng(4);
    let n = inst.order() as f64;
    for mu in [1e-1, 1e-3, 1e-6] {
        let params = SmoothingParams::new(mu).unwrap();
        for _ in 0..100 {
            let y = normal_vec(&mut r, inst.order(), 1.0);
            let exact =
                y.sum() + inst.alpha() * EigDecomp::new(&inst.m(&y)).unwrap().lambda_max().max(0.0);
            let f = eval_smoothed_maxcut(&inst, &params, &y).unwrap().f;
            let tol = 1e-12 * exact.abs().max(1.0);
            assert!(f <= exact + tol);
            assert!(f >= exact - inst.alpha() * mu * (n + 1.0).ln() - tol);
        }
    }
}

#[test]
fn smoothed_oracles_stay_finite_at_tiny_mu() {
    let mut r = rng(9);
    for case in smoothed_cases(9, 1e-16) {
        for _ in 0..10 {
            let x = case.sample(&mut r) * 300.0;
            let out = case.objective.eval(&x).unwrap();
            assert!(out.is_finite(), "{}", case.name);
        }
    }
}
