//! Exact-penalty dual of nuclear-norm matrix completion.
//!
//! The dual optimum is −2·(nuclear norm of the minimum-norm completion);
//! the nullity of the dual slack estimates the rank of the primal solution.

use nslab::lab::{spectrum_report, DualInstance};
use nslab::problems::{gen_random_matcomp, MatCompInstance};
use nslab::smoothing::Smoothed;
use nslab::solvers::{run, Method, SolverConfig};
use nslab::Vector;

fn main() {
    let cfg = SolverConfig::new(Method::Bfgs).with_max_evals(5000);

    let single = MatCompInstance::new(1, 1, vec![(0, 0)], vec![1.0], 2.0).unwrap();
    let y0 = Vector::zeros(1);
    println!(
        "single entry: f = {:.9} (optimum −2)",
        run(&single, &y0, &cfg).unwrap().final_f
    );
    let s = Smoothed::new(single, 1e-7).unwrap();
    println!(
        "  smoothed μ=1e-7: {:.9}",
        run(&s, &y0, &cfg).unwrap().final_f
    );

    let g = gen_random_matcomp(4, 8, 12, 2, 0.6).unwrap();
    let nuclear: f64 = g.truth.singular_values().iter().sum();
    let inst = g.into_instance(100.0).unwrap();
    let r = run(
        &inst,
        &Vector::zeros(inst.nobs()),
        &cfg.clone().with_max_evals(20_000),
    )
    .unwrap();
    println!(
        "8×12 rank 2, |Ω| = {}: dual value {:.6}, −2‖X_true‖_* = {:.6}",
        inst.nobs(),
        r.final_f,
        -2.0 * nuclear
    );
    let report = spectrum_report(&DualInstance::MatComp(inst), &r.final_x, 6).unwrap();
    println!("smallest eigenvalues of Z: {:?}", report.eigenvalues);
}
