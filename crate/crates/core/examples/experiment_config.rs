//! Running an experiment from a JSON config and writing its CSV outputs.
//!
//!     cargo run --example experiment_config -- /tmp/nslab-demo

use nslab::lab::{run_experiment, write_outputs, ExperimentConfig};

const CONFIG: &str = r#"{
    "problem": {"kind": "max_cut", "graph": {"type": "cycle", "n": 6}, "alpha": 12, "mu": 1e-4},
    "methods": [
        {"method": "bfgs"},
        {"method": "lbfgs", "m": 5, "scaled": true},
        {"method": "gradient"}
    ],
    "max_evals": 3000,
    "seed": 11,
    "f_star": 6.0
}"#;

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "nslab-demo".into());
    let cfg: ExperimentConfig = serde_json::from_str(CONFIG).unwrap();
    let res = run_experiment(&cfg).unwrap();
    let files = write_outputs(&res, &std::path::Path::new(&out).join("c6")).unwrap();
    print!("{}", std::fs::read_to_string(&files.summary).unwrap());
    for t in &files.traces {
        println!("trace: {}", t.display());
    }
}
