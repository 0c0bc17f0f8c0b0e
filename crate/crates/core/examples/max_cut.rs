//! The exact-penalty Max Cut dual on small graphs with known optima, and the
//! spectrum of the dual slack on a random graph.

use nslab::lab::{gen_random_graph, spectrum_report, DualInstance};
use nslab::problems::{complete_graph, cycle_graph, laplacian_from_edges, MaxCutInstance};
use nslab::smoothing::Smoothed;
use nslab::solvers::{run, Method, SolverConfig};
use nslab::Vector;

fn main() {
    let cfg = SolverConfig::new(Method::Bfgs).with_max_evals(5000);
    for (name, n, edges, f_star) in [
        ("K2", 2, complete_graph(2), 1.0),
        ("C4", 4, cycle_graph(4), 4.0),
    ] {
        let lap = laplacian_from_edges(&edges, n).unwrap();
        let inst = MaxCutInstance::new(lap, 2.0 * n as f64).unwrap();
        let y0 = Vector::zeros(n);
        let exact = run(&inst, &y0, &cfg).unwrap().final_f;
        let smooth = run(&Smoothed::new(inst, 1e-7).unwrap(), &y0, &cfg)
            .unwrap()
            .final_f;
        println!("{name}: f* = {f_star}, penalty {exact:.9}, smoothed {smooth:.9}");
    }

    let n = 40;
    let lap = laplacian_from_edges(&gen_random_graph(3, n, 0.2).unwrap(), n).unwrap();
    let inst = MaxCutInstance::new(lap, 2.0 * n as f64).unwrap();
    let r = run(
        &inst,
        &Vector::zeros(n),
        &cfg.clone().with_max_evals(20_000),
    )
    .unwrap();
    let report = spectrum_report(&DualInstance::MaxCut(inst), &r.final_x, 10).unwrap();
    println!(
        "G(40, 0.2): dual value {:.6}, smallest eigenvalues of Z:",
        r.final_f
    );
    for l in &report.eigenvalues {
        println!("  {l:>10.3e}");
    }
    println!("eigenvalues below 1e-6: {}", report.nullity(1e-6));
}
