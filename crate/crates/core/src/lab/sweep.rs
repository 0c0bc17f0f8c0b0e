use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::solvers::{run, Method, RunStatus};

use super::config::ExperimentConfig;
use super::io::fmt_f64;
use super::theorem::{check_gradient_failure, check_thm1_failure};
use super::LabError;

/// Axes of a parameter grid. Empty axes keep the base configuration's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub a: Vec<f64>,
    pub n: Vec<usize>,
    pub c1: Vec<f64>,
    pub mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    #[serde(default)]
    pub grid: SweepGrid,
    /// Seeds `base.seed, base.seed + 1, …`; each draws its own starting point.
    #[serde(default = "one")]
    pub seeds: u64,
}

fn one() -> u64 {
    1
}

/// One grid point; `None` means the axis was not swept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub a: Option<f64>,
    pub n: Option<usize>,
    pub c1: Option<f64>,
    pub mu: Option<f64>,
}

/// Status counts for one (grid point, method) cell across all seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub point: SweepPoint,
    pub method: Method,
    pub counts: [usize; 5],
    pub min_final_f: f64,
    pub max_final_f: f64,
    pub thm1_failure: Option<bool>,
    pub gradient_failure: Option<bool>,
}

impl SweepCell {
    pub fn runs(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, status: RunStatus) -> usize {
        let i = RunStatus::ALL.iter().position(|&s| s == status).unwrap();
        self.counts[i]
    }
}

fn axis<T: Copy>(v: &[T]) -> Vec<Option<T>> {
    if v.is_empty() {
        vec![None]
    } else {
        v.iter().copied().map(Some).collect()
    }
}

impl SweepGrid {
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &a in &axis(&self.a) {
            for &n in &axis(&self.n) {
                for &c1 in &axis(&self.c1) {
                    for &mu in &axis(&self.mu) {
                        out.push(SweepPoint { a, n, c1, mu });
                    }
                }
            }
        }
        out
    }
}

impl SweepPoint {
    fn apply(&self, base: &ExperimentConfig) -> Result<ExperimentConfig, LabError> {
        let mut cfg = base.clone();
        if let Some(a) = self.a {
            cfg.problem.set_a(a)?;
        }
        if let Some(n) = self.n {
            cfg.problem.set_n(n)?;
        }
        if let Some(mu) = self.mu {
            cfg.problem.set_mu(mu)?;
        }
        if let Some(c1) = self.c1 {
            cfg.line_search = cfg.line_search.with_c1(c1);
        }
        cfg.output = None;
        Ok(cfg)
    }
}

/// Runs every (grid point, seed, method) combination, in parallel, and
/// tallies statuses per (grid point, method).
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>, LabError> {
    if cfg.seeds == 0 {
        return Err(LabError::Config("seeds must be ≥ 1".into()));
    }
    let points = cfg.grid.points();
    let configs = points
        .iter()
        .map(|p| {
            let c = p.apply(&cfg.base)?;
            c.validate()?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, LabError>>()?;

    let methods = &cfg.base.methods;
    let tasks: Vec<(usize, u64, usize)> = (0..points.len())
        .flat_map(|p| (0..cfg.seeds).flat_map(move |s| (0..methods.len()).map(move |m| (p, s, m))))
        .collect();

    let outcomes = tasks
        .par_iter()
        .map(|&(p, s, m)| {
            let c = &configs[p];
            let built = c.problem.build()?;
            let seed = c.seed + s;
            let x0 = c.start_spec().sample(built.objective.dim(), seed)?;
            let rec = run(
                &*built.objective,
                &x0,
                &c.solver_config(methods[m]).with_seed(seed),
            )?;
            Ok((rec.status, rec.final_f))
        })
        .collect::<Result<Vec<_>, LabError>>()?;

    // Single collector: tasks are ordered point-major, then seed, then method.
    let mut cells: Vec<SweepCell> = Vec::new();
    for (p, point) in points.iter().enumerate() {
        let c1 = configs[p].line_search.c1;
        let (thm1, grad) = match configs[p].problem {
            super::ProblemSpec::AbsLinear { a, n } => (
                Some(check_thm1_failure(a, n, c1)),
                Some(check_gradient_failure(a, n, c1)),
            ),
            _ => (None, None),
        };
        for (m, &method) in methods.iter().enumerate() {
            let mut cell = SweepCell {
                point: *point,
                method,
                counts: [0; 5],
                min_final_f: f64::INFINITY,
                max_final_f: f64::NEG_INFINITY,
                thm1_failure: thm1,
                gradient_failure: grad,
            };
            for s in 0..cfg.seeds as usize {
                let idx = (p * cfg.seeds as usize + s) * methods.len() + m;
                let (status, f) = outcomes[idx];
                let i = RunStatus::ALL.iter().position(|&x| x == status).unwrap();
                cell.counts[i] += 1;
                cell.min_final_f = cell.min_final_f.min(f);
                cell.max_final_f = cell.max_final_f.max(f);
            }
            cells.push(cell);
        }
    }
    Ok(cells)
}

pub fn write_sweep<W: Write>(out: W, cells: &[SweepCell]) -> Result<(), LabError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["a", "n", "c1", "mu", "method", "runs"];
    header.extend(RunStatus::ALL.iter().map(|s| s.as_str()));
    header.extend([
        "min_final_f",
        "max_final_f",
        "thm1_failure",
        "gradient_failure",
    ]);
    w.write_record(&header)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for c in cells {
        let mut row = vec![
            opt(c.point.a.map(fmt_f64)),
            opt(c.point.n.map(|n| n.to_string())),
            opt(c.point.c1.map(fmt_f64)),
            opt(c.point.mu.map(fmt_f64)),
            c.method.label(),
            c.runs().to_string(),
        ];
        row.extend(c.counts.iter().map(|k| k.to_string()));
        row.push(fmt_f64(c.min_final_f));
        row.push(fmt_f64(c.max_final_f));
        row.push(opt(c.thm1_failure.map(|b| b.to_string())));
        row.push(opt(c.gradient_failure.map(|b| b.to_string())));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
