//! Minimizing λ_max(C − Σ yᵢAᵢ) on a random instance, with and without
//! smoothing, and the multiplicity of λ_max at the answer.

use nslab::problems::{gen_random_max_eig, EigDecomp};
use nslab::smoothing::Smoothed;
use nslab::solvers::{run, Method, SolverConfig};
use nslab::Vector;

fn main() {
    let inst = gen_random_max_eig(1, 20, 10).unwrap();
    let y0 = Vector::from_element(10, 1.0);
    let cfg = SolverConfig::new(Method::Bfgs).with_max_evals(20_000);

    let r = run(&inst, &y0, &cfg).unwrap();
    let eig = EigDecomp::new(&inst.w(&r.final_x)).unwrap();
    let top = eig.lambdas[0];
    println!("nonsmooth: f = {:.10}, status {}", r.final_f, r.status);
    println!("  top eigenvalues − λ_max:");
    for l in eig.lambdas.iter().take(6) {
        println!("    {:>10.3e}", l - top);
    }

    for mu in [1e-1, 1e-3, 1e-5] {
        let s = Smoothed::new(inst.clone(), mu).unwrap();
        let r = run(&s, &y0, &cfg).unwrap();
        let lmax = EigDecomp::new(&inst.w(&r.final_x)).unwrap().lambda_max();
        println!(
            "μ = {mu:.0e}: f_μ = {:.10}, λ_max there = {lmax:.10}",
            r.final_f
        );
    }
}
