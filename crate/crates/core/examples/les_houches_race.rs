//! Four methods on the Les Houches function, n = 100, 10⁴ evaluations each.
//!
//! Full BFGS drives f toward 0; the limited-memory variants and the
//! subgradient method barely move from f ≈ 1.

use nslab::lab::{run_experiment, ExperimentConfig, ProblemSpec};
use nslab::solvers::Method;

fn main() {
    let methods = vec![
        Method::Bfgs,
        Method::Lbfgs { m: 1, scaled: true },
        Method::Lbfgs {
            m: 1,
            scaled: false,
        },
        Method::Lbfgs {
            m: 10,
            scaled: true,
        },
        Method::Subgradient,
    ];
    let mut cfg = ExperimentConfig::new(ProblemSpec::LesHouches { n: 100, mu: None }, methods);
    cfg.f_star = Some(0.0);
    let res = run_experiment(&cfg).unwrap();
    println!(
        "{:<12} {:<17} {:>10} {:>6} {:>9}",
        "method", "status", "final f", "evals", "evals/it"
    );
    for r in &res.records {
        println!(
            "{:<12} {:<17} {:>10.3e} {:>6} {:>9.2}",
            r.method.label(),
            r.status.as_str(),
            r.final_f,
            r.evals,
            r.evals_per_iteration()
        );
    }
}
