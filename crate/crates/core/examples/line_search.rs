//! The Armijo-Wolfe bracketing line search on three one-dimensional cases.
//!
//!     cargo run --example line_search

use nslab::linesearch::{bracketing_search, LineSearchParams};
use nslab::{FnObjective, Objective, Vector};

fn main() {
    let params = LineSearchParams::default();
    let v = |x: f64| Vector::from_element(1, x);

    let quad = FnObjective::new(1, |x: &Vector| (x[0] * x[0], v(2.0 * x[0])));
    let abs = FnObjective::new(1, |x: &Vector| {
        (x[0].abs(), v(if x[0] >= 0.0 { 1.0 } else { -1.0 }))
    });
    let linear = FnObjective::new(1, |x: &Vector| (-x[0], v(-1.0)));

    for (name, p, x0) in [
        ("x^2", &quad as &dyn Objective, -1.0),
        ("|x|", &abs, -5.0),
        ("-x", &linear, 0.0),
    ] {
        let x = v(x0);
        let r0 = p.eval(&x).unwrap();
        let d = -&r0.g;
        let out = bracketing_search(p, &x, &d, r0.f, &r0.g, &params).unwrap();
        println!(
            "{name:>4} from {x0:>4}: {:?}, t = {}, evals = {}, f = {:.3e}",
            out.status, out.t, out.evals, out.f_new
        );
    }
}
