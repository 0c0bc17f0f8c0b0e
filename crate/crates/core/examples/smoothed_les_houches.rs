//! Nesterov-smoothed Les Houches: the Hessian norm at 0 and a μ sweep.

use nslab::lab::StartSpec;
use nslab::problems::LesHouchesProblem;
use nslab::smoothing::{eval_smoothed_les_houches, BandedDiffMatrix, Smoothed};
use nslab::solvers::{run, Method, SolverConfig};
use nslab::{Matrix, Vector};

fn hessian_norm_at_zero(n: usize, mu: f64) -> f64 {
    // Central differences of the gradient, column by column.
    let h = 1e-6 * mu;
    let mut hess = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = Vector::zeros(n);
        e[j] = h;
        let gp = eval_smoothed_les_houches(n, mu, &e).unwrap().g;
        let gm = eval_smoothed_les_houches(n, mu, &-e).unwrap().g;
        hess.set_column(j, &((gp - gm) / (2.0 * h)));
    }
    hess.symmetric_eigenvalues().amax()
}

fn main() {
    let (n, mu) = (50, 1e-2);
    let a = BandedDiffMatrix::new(n).norm2(1e-10);
    println!(
        "‖∇²f_μ(0)‖ = {:.8e}, ‖A‖²/(nμ) = {:.8e}",
        hessian_norm_at_zero(n, mu),
        a * a / (n as f64 * mu)
    );

    let n = 100;
    let p = LesHouchesProblem::new(n).unwrap();
    let x0 = StartSpec::Ball {
        center: 1.0,
        radius: 0.1,
    }
    .sample(n, 0)
    .unwrap();
    println!("{:>6} {:>12} {:>12}", "μ", "bfgs", "sc-lbfgs-1");
    for k in 1..=6 {
        let mu = 10f64.powi(-k);
        let s = Smoothed::new(p, mu).unwrap();
        let f = |m| {
            let cfg = SolverConfig::new(m)
                .with_max_iters(10_000)
                .with_max_evals(1_000_000);
            run(&s, &x0, &cfg).unwrap().final_f
        };
        println!(
            "{mu:>6.0e} {:>12.3e} {:>12.3e}",
            f(Method::Bfgs),
            f(Method::Lbfgs { m: 1, scaled: true })
        );
    }
}
