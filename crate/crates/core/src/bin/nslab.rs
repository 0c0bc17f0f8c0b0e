use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nslab::lab::{
    check_gradient_failure, check_thm1_failure, gen_random_graph, read_vector, run_experiment,
    spectrum_report, sweep, write_outputs, write_summary, write_sweep, ExperimentConfig,
    ProblemSpec, SweepConfig,
};
use nslab::problems::{
    complete_graph, cycle_graph, gen_random_matcomp, gen_random_max_eig, write_gset,
};
use nslab::solvers::Method;

#[derive(Parser)]
#[command(
    name = "nslab",
    version,
    about = "Quasi-Newton methods on nonsmooth problems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Race methods on one problem from a shared starting point.
    Run(RunArgs),
    /// Run a parameter grid and print status counts as CSV.
    Sweep {
        config: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the failure predicates for a|x₁| + Σxᵢ.
    CheckThm {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        c1: f64,
    },
    /// Write a generated instance to disk.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Smallest eigenvalues of the dual slack matrix at a saved iterate.
    Spectrum {
        /// Experiment config describing a max_cut or mat_comp problem.
        #[arg(long)]
        config: PathBuf,
        /// Flat text vector, one coordinate per line.
        #[arg(long)]
        iterate: PathBuf,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Eigenvalues below this count toward the nullity estimate.
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SimpleProblem {
    AbsLinear,
    LesHouches,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem to use when no config is given.
    #[arg(long, value_enum)]
    problem: Option<SimpleProblem>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    /// Comma-separated labels: bfgs, sc-lbfgs-M, no-lbfgs-M, gradient, subgradient.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    f_star: Option<f64>,
    /// Output prefix for trace and summary CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random max-eigenvalue instance (JSON).
    MaxEig {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        nvars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random low-rank completion instance with its ground truth (JSON).
    Matcomp {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0.2)]
        p_obs: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Graph in Gset format.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        #[arg(long)]
        n: usize,
        /// Edge probability (random graphs only).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Random,
    Complete,
    Cycle,
}

fn experiment_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match (&args.config, args.problem) {
        (Some(path), _) => ExperimentConfig::from_file(path)
            .with_context(|| format!("reading {}", path.display()))?,
        (None, Some(p)) => {
            let n = args.n.context("--n is required")?;
            let problem = match p {
                SimpleProblem::AbsLinear => ProblemSpec::AbsLinear {
                    a: args.a.context("--a is required for abs-linear")?,
                    n,
                },
                SimpleProblem::LesHouches => ProblemSpec::LesHouches { n, mu: args.mu },
            };
            ExperimentConfig::new(problem, vec![])
        }
        (None, None) => bail!("give either --config or --problem"),
    };
    if !args.methods.is_empty() {
        cfg.methods = args
            .methods
            .iter()
            .map(|s| s.parse::<Method>())
            .collect::<Result<_, _>>()?;
    }
    if cfg.methods.is_empty() {
        cfg.methods = vec![Method::Bfgs];
    }
    if let Some(v) = args.max_evals {
        cfg.max_evals = v;
    }
    if let Some(v) = args.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = args.grad_tol {
        cfg.grad_tol = v;
    }
    if let Some(v) = args.c1 {
        cfg.line_search.c1 = v;
    }
    if let Some(v) = args.c2 {
        cfg.line_search.c2 = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if args.f_star.is_some() {
        cfg.f_star = args.f_star;
    }
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    Ok(cfg)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(args) => {
            let cfg = experiment_config(&args)?;
            let result = run_experiment(&cfg)?;
            write_summary(io::stdout().lock(), &result)?;
            if let Some(prefix) = &cfg.output {
                let files = write_outputs(&result, prefix)?;
                eprintln!(
                    "wrote {} and {} traces",
                    files.summary.display(),
                    files.traces.len()
                );
            }
        }
        Cmd::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg: SweepConfig = serde_json::from_str(&text)?;
            cfg.base
                .resolve_paths(config.parent().unwrap_or(std::path::Path::new(".")));
            let cells = sweep(&cfg)?;
            match out {
                Some(p) => write_sweep(BufWriter::new(fs::File::create(p)?), &cells)?,
                None => write_sweep(io::stdout().lock(), &cells)?,
            }
        }
        Cmd::CheckThm { a, n, c1 } => {
            if !(c1 > 0.0 && c1 < 1.0) {
                bail!("c1 must lie in (0, 1)");
            }
            println!("thm1_failure={}", check_thm1_failure(a, n, c1));
            println!("gradient_failure={}", check_gradient_failure(a, n, c1));
        }
        Cmd::Gen { what } => match what {
            GenCmd::MaxEig {
                order,
                nvars,
                seed,
                out,
            } => {
                let inst = gen_random_max_eig(seed, order, nvars)?;
                serde_json::to_writer(BufWriter::new(fs::File::create(out)?), &inst)?;
            }
            GenCmd::Matcomp {
                n1,
                n2,
                rank,
                p_obs,
                seed,
                out,
            } => {
                let g = gen_random_matcomp(seed, n1, n2, rank, p_obs)?;
                // The truth is a feasible completion, so 2‖truth‖_* bounds 2‖X*‖_*.
                let nuc: f64 = g.truth.singular_values().sum();
                eprintln!(
                    "|Ω| = {}; alpha must exceed {:.6e}",
                    g.omega.len(),
                    2.0 * nuc
                );
                serde_json::to_writer(BufWriter::new(fs::File::create(out)?), &g)?;
            }
            GenCmd::Graph {
                kind,
                n,
                p,
                seed,
                out,
            } => {
                let edges = match kind {
                    GraphKind::Random => gen_random_graph(seed, n, p)?,
                    GraphKind::Complete => complete_graph(n),
                    GraphKind::Cycle => cycle_graph(n),
                };
                let mut w = BufWriter::new(fs::File::create(out)?);
                write_gset(&mut w, n, &edges)?;
                w.flush()?;
            }
        },
        Cmd::Spectrum {
            config,
            iterate,
            k,
            threshold,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let built = cfg.problem.build()?;
            let Some(dual) = built.dual else {
                bail!("spectrum needs a max_cut or mat_comp problem");
            };
            let y = read_vector(&iterate)?;
            let report = spectrum_report(&dual, &y, k)?;
            let mut out = io::stdout().lock();
            for l in &report.eigenvalues {
                writeln!(out, "{l:.16e}")?;
            }
            eprintln!(
                "{} eigenvalues below {threshold:e}",
                report.nullity(threshold)
            );
        }
    }
    Ok(())
}
