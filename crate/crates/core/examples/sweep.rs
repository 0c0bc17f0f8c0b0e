//! A parameter sweep over a and c1 on a|x₁| + Σxᵢ, printed as CSV.

use nslab::lab::{sweep, write_sweep, ExperimentConfig, ProblemSpec, SweepConfig, SweepGrid};
use nslab::solvers::Method;

fn main() {
    let mut base = ExperimentConfig::new(
        ProblemSpec::AbsLinear { a: 1.0, n: 10 },
        vec![Method::Lbfgs { m: 1, scaled: true }, Method::Gradient],
    );
    base.max_iters = 2000;
    base.max_evals = 50_000;
    let cfg = SweepConfig {
        base,
        grid: SweepGrid {
            a: vec![1.0, 3.0, 6.0, 9.0],
            c1: vec![1e-4, 0.2],
            ..Default::default()
        },
        seeds: 5,
    };
    let cells = sweep(&cfg).unwrap();
    write_sweep(std::io::stdout().lock(), &cells).unwrap();
}
