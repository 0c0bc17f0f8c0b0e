use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linesearch::LineSearchParams;
use crate::problems::{
    complete_graph, cycle_graph, gen_random_matcomp, gen_random_max_eig, laplacian_from_edges,
    parse_gset, AbsLinearProblem, Edge, GeneratedMatComp, LesHouchesProblem, MatCompInstance,
    MaxCutInstance, MaxEigInstance,
};
use crate::smoothing::Smoothed;
use crate::solvers::{Method, SolverConfig};
use crate::{Objective, Vector};

use super::gen::gen_random_graph;
use super::io::read_vector;
use super::spectrum::DualInstance;
use super::LabError;

/// Which problem to build. `mu`, when present, selects the smoothed variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    AbsLinear {
        a: f64,
        n: usize,
    },
    LesHouches {
        n: usize,
        #[serde(default)]
        mu: Option<f64>,
    },
    /// Loaded from `path` if given, otherwise generated from `seed`.
    MaxEig {
        #[serde(default)]
        path: Option<PathBuf>,
        #[serde(default = "default_order")]
        order: usize,
        #[serde(default = "default_nvars")]
        nvars: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        mu: Option<f64>,
    },
    MaxCut {
        graph: GraphSpec,
        /// Defaults to `2N`. Any `α ≥ N` is exact, but at `α = N` the
        /// penalty is constant along `y + t𝟏` wherever `λ_max > 0`.
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default = "yes")]
        laplacian_quarter: bool,
        #[serde(default)]
        mu: Option<f64>,
    },
    MatComp {
        #[serde(default)]
        path: Option<PathBuf>,
        #[serde(default = "default_n1")]
        n1: usize,
        #[serde(default = "default_n2")]
        n2: usize,
        #[serde(default = "default_rank")]
        rank: usize,
        #[serde(default = "default_p_obs")]
        p_obs: f64,
        #[serde(default)]
        seed: u64,
        alpha: f64,
        #[serde(default = "default_offdiag_scale")]
        offdiag_scale: f64,
        #[serde(default)]
        mu: Option<f64>,
    },
}

fn default_order() -> usize {
    50
}
fn default_nvars() -> usize {
    25
}
fn default_n1() -> usize {
    20
}
fn default_n2() -> usize {
    40
}
fn default_rank() -> usize {
    3
}
fn default_p_obs() -> f64 {
    0.2
}
fn default_offdiag_scale() -> f64 {
    0.5
}
fn default_max_evals() -> usize {
    SolverConfig::new(Method::Bfgs).max_evals
}
fn default_max_iters() -> usize {
    SolverConfig::new(Method::Bfgs).max_iters
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Gset {
        path: PathBuf,
    },
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// Erdős–Rényi `G(n, p)` with unit weights.
    Random {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl GraphSpec {
    pub fn edges(&self) -> Result<(usize, Vec<Edge>), LabError> {
        Ok(match self {
            GraphSpec::Gset { path } => {
                let f = fs::File::open(path).map_err(|e| {
                    LabError::Config(format!("cannot open {}: {e}", path.display()))
                })?;
                parse_gset(BufReader::new(f))?
            }
            GraphSpec::Complete { n } => (*n, complete_graph(*n)),
            GraphSpec::Cycle { n } => (*n, cycle_graph(*n)),
            GraphSpec::Random { n, p, seed } => (*n, gen_random_graph(*seed, *n, *p)?),
        })
    }
}

/// An objective ready to hand to [`run`](crate::solvers::run), plus the
/// SDP dual instance behind it, if any.
pub struct BuiltProblem {
    pub objective: Box<dyn Objective + Send>,
    pub dual: Option<DualInstance>,
}

fn boxed<P: Objective + Send + 'static>(
    p: P,
    mu: Option<f64>,
) -> Result<Box<dyn Objective + Send>, LabError>
where
    Smoothed<P>: Objective,
{
    Ok(match mu {
        Some(mu) => Box::new(Smoothed::new(p, mu)?),
        None => Box::new(p),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, LabError> {
    let f = fs::File::open(path)
        .map_err(|e| LabError::Config(format!("cannot open {}: {e}", path.display())))?;
    Ok(serde_json::from_reader(BufReader::new(f))?)
}

impl ProblemSpec {
    pub fn build(&self) -> Result<BuiltProblem, LabError> {
        let mut dual = None;
        let objective: Box<dyn Objective + Send> = match self {
            ProblemSpec::AbsLinear { a, n } => Box::new(AbsLinearProblem::new(*a, *n)?),
            ProblemSpec::LesHouches { n, mu } => boxed(LesHouchesProblem::new(*n)?, *mu)?,
            ProblemSpec::MaxEig {
                path,
                order,
                nvars,
                seed,
                mu,
            } => {
                let inst: MaxEigInstance = match path {
                    Some(p) => read_json(p)?,
                    None => gen_random_max_eig(*seed, *order, *nvars)?,
                };
                boxed(inst, *mu)?
            }
            ProblemSpec::MaxCut {
                graph,
                alpha,
                laplacian_quarter,
                mu,
            } => {
                let (n, edges) = graph.edges()?;
                let lap = laplacian_from_edges(&edges, n)?;
                let alpha = alpha.unwrap_or(2.0 * n as f64);
                let inst = MaxCutInstance::with_convention(lap, alpha, *laplacian_quarter)?;
                dual = Some(DualInstance::MaxCut(inst.clone()));
                boxed(inst, *mu)?
            }
            ProblemSpec::MatComp {
                path,
                n1,
                n2,
                rank,
                p_obs,
                seed,
                alpha,
                offdiag_scale,
                mu,
            } => {
                let g: GeneratedMatComp = match path {
                    Some(p) => read_json(p)?,
                    None => gen_random_matcomp(*seed, *n1, *n2, *rank, *p_obs)?,
                };
                let inst = MatCompInstance::with_offdiag_scale(
                    g.n1,
                    g.n2,
                    g.omega,
                    g.b,
                    *alpha,
                    *offdiag_scale,
                )?;
                dual = Some(DualInstance::MatComp(inst.clone()));
                boxed(inst, *mu)?
            }
        };
        Ok(BuiltProblem { objective, dual })
    }

    pub fn mu(&self) -> Option<f64> {
        match self {
            ProblemSpec::AbsLinear { .. } => None,
            ProblemSpec::LesHouches { mu, .. }
            | ProblemSpec::MaxEig { mu, .. }
            | ProblemSpec::MaxCut { mu, .. }
            | ProblemSpec::MatComp { mu, .. } => *mu,
        }
    }

    pub(crate) fn set_mu(&mut self, value: f64) -> Result<(), LabError> {
        match self {
            ProblemSpec::AbsLinear { .. } => {
                Err(LabError::Config("abs_linear has no smoothing".into()))
            }
            ProblemSpec::LesHouches { mu, .. }
            | ProblemSpec::MaxEig { mu, .. }
            | ProblemSpec::MaxCut { mu, .. }
            | ProblemSpec::MatComp { mu, .. } => {
                *mu = Some(value);
                Ok(())
            }
        }
    }

    pub(crate) fn set_a(&mut self, value: f64) -> Result<(), LabError> {
        match self {
            ProblemSpec::AbsLinear { a, .. } => {
                *a = value;
                Ok(())
            }
            _ => Err(LabError::Config("only abs_linear has a parameter a".into())),
        }
    }

    pub(crate) fn set_n(&mut self, value: usize) -> Result<(), LabError> {
        match self {
            ProblemSpec::AbsLinear { n, .. } | ProblemSpec::LesHouches { n, .. } => {
                *n = value;
                Ok(())
            }
            _ => Err(LabError::Config(
                "only abs_linear and les_houches have a parameter n".into(),
            )),
        }
    }

    fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        match self {
            ProblemSpec::MaxEig { path: Some(p), .. }
            | ProblemSpec::MatComp { path: Some(p), .. } => {
                vec![p]
            }
            ProblemSpec::MaxCut {
                graph: GraphSpec::Gset { path },
                ..
            } => vec![path],
            _ => vec![],
        }
    }

    fn default_start(&self) -> StartSpec {
        match self {
            ProblemSpec::AbsLinear { .. } => StartSpec::Normal {
                nonzero_first: true,
            },
            _ => StartSpec::Ball {
                center: 1.0,
                radius: 0.1,
            },
        }
    }
}

/// How the shared starting point is drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sampler", rename_all = "snake_case", deny_unknown_fields)]
pub enum StartSpec {
    /// Uniform in the ball of `radius` around `center·𝟏`: a normalized
    /// standard normal direction times `radius·u^{1/n}`.
    Ball {
        center: f64,
        radius: f64,
    },
    /// Standard normal; with `nonzero_first`, redrawn until `|x₁| > 1e-8`.
    Normal {
        #[serde(default)]
        nonzero_first: bool,
    },
    Constant {
        value: f64,
    },
    File {
        path: PathBuf,
    },
}

impl StartSpec {
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vector, LabError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal =
            |rng: &mut ChaCha8Rng| Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = match self {
            StartSpec::Ball { center, radius } => {
                let z = loop {
                    let z = normal(&mut rng);
                    if z.norm() > 0.0 {
                        break z;
                    }
                };
                let u: f64 = rng.random();
                Vector::from_element(n, *center) + z.normalize() * (radius * u.powf(1.0 / n as f64))
            }
            StartSpec::Normal { nonzero_first } => loop {
                let z = normal(&mut rng);
                if !nonzero_first || n == 0 || z[0].abs() > 1e-8 {
                    break z;
                }
            },
            StartSpec::Constant { value } => Vector::from_element(n, *value),
            StartSpec::File { path } => {
                let x = read_vector(path)?;
                if x.len() != n {
                    return Err(LabError::Config(format!(
                        "{} has {} entries, problem dimension is {n}",
                        path.display(),
                        x.len()
                    )));
                }
                x
            }
        };
        Ok(x)
    }
}

/// One experiment: a problem, the methods to race on it from a shared
/// starting point, and their common budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub methods: Vec<Method>,
    #[serde(default = "default_max_evals")]
    pub max_evals: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub grad_tol: f64,
    #[serde(default)]
    pub line_search: LineSearchParams,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to a standard normal draw for `abs_linear` and to the ball of
    /// radius 0.1 around `𝟏` otherwise.
    #[serde(default)]
    pub start: Option<StartSpec>,
    /// Known optimal value, if any; enables relative errors in the summary.
    #[serde(default)]
    pub f_star: Option<f64>,
    /// Output path prefix; nothing is written when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemSpec, methods: Vec<Method>) -> Self {
        Self {
            problem,
            methods,
            max_evals: default_max_evals(),
            max_iters: default_max_iters(),
            grad_tol: 0.0,
            line_search: LineSearchParams::default(),
            seed: 0,
            start: None,
            f_star: None,
            output: None,
        }
    }

    /// Parses a JSON config. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, LabError> {
        let mut cfg: Self = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in self.problem.paths_mut() {
            fix(p);
        }
        if let Some(StartSpec::File { path }) = &mut self.start {
            fix(path);
        }
        if let Some(p) = &mut self.output {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.methods.is_empty() {
            return Err(LabError::Config("at least one method is required".into()));
        }
        let mut labels: Vec<String> = self.methods.iter().map(|m| m.label()).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(LabError::Config(format!("method {} listed twice", w[0])));
        }
        let mut files = self.problem.clone();
        for p in files.paths_mut() {
            if !p.exists() {
                return Err(LabError::Config(format!("{} does not exist", p.display())));
            }
        }
        if let Some(StartSpec::File { path }) = &self.start {
            if !path.exists() {
                return Err(LabError::Config(format!(
                    "{} does not exist",
                    path.display()
                )));
            }
        }
        for m in &self.methods {
            self.solver_config(*m).validate()?;
        }
        Ok(())
    }

    pub fn start_spec(&self) -> StartSpec {
        self.start
            .clone()
            .unwrap_or_else(|| self.problem.default_start())
    }

    pub fn solver_config(&self, method: Method) -> SolverConfig {
        let mut cfg = SolverConfig::new(method)
            .with_max_evals(self.max_evals)
            .with_max_iters(self.max_iters)
            .with_grad_tol(self.grad_tol)
            .with_line_search(self.line_search)
            .with_seed(self.seed);
        if let Some(f) = self.f_star {
            cfg = cfg.with_f_star(f);
        }
        cfg
    }
}
