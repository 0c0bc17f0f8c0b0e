//! Scaled L-BFGS-1 on the unbounded function a|x₁| + Σxᵢ.
//!
//! For small `a` the method finds the ray along which f → −∞; for large `a`
//! it stalls with f bounded below, as predicted by the failure condition.

use nslab::lab::{check_gradient_failure, check_thm1_failure, StartSpec};
use nslab::linesearch::LineSearchParams;
use nslab::problems::AbsLinearProblem;
use nslab::solvers::{run, Method, RunStatus, SolverConfig};

fn main() {
    let n = 10;
    let c1 = 0.2;
    let start = StartSpec::Normal {
        nonzero_first: true,
    };
    println!("   a  thm1  grad  unbounded/10  worst final f");
    for a in [1.0, 3.0, 5.2, 6.0, 8.0] {
        let p = AbsLinearProblem::new(a, n).unwrap();
        let mut unbounded = 0;
        let mut worst = f64::NEG_INFINITY;
        for seed in 0..10 {
            let x0 = start.sample(n, seed).unwrap();
            let ls = LineSearchParams::default().with_c1(c1);
            let cfg = SolverConfig::new(Method::Lbfgs { m: 1, scaled: true })
                .with_line_search(ls)
                .with_max_iters(5000)
                .with_max_evals(100_000);
            let r = run(&p, &x0, &cfg).unwrap();
            if r.status == RunStatus::UnboundedDetected {
                unbounded += 1;
            } else {
                worst = worst.max(r.final_f);
            }
        }
        println!(
            "{a:>4}  {:>5} {:>5}  {unbounded:>12}  {:>13}",
            check_thm1_failure(a, n, c1),
            check_gradient_failure(a, n, c1),
            if unbounded == 10 {
                "-".to_string()
            } else {
                format!("{worst:.3e}")
            }
        );
    }
}
