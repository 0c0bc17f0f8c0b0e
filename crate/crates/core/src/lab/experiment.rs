use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::solvers::{run, RunRecord};
use crate::Vector;

use super::config::ExperimentConfig;
use super::io::{fmt_f64, write_trace, write_vector};
use super::LabError;

/// Records of one experiment, in the order the methods were listed.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub x0: Vector,
    pub x0_hash: u64,
    pub f_star: Option<f64>,
    pub records: Vec<RunRecord>,
}

impl ExperimentResult {
    pub fn record(&self, label: &str) -> Option<&RunRecord> {
        self.records.iter().find(|r| r.method.label() == label)
    }
}

/// Hash of the exact bit patterns of `x`.
pub fn vector_hash(x: &Vector) -> u64 {
    let mut h = DefaultHasher::new();
    x.len().hash(&mut h);
    for v in x.iter() {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

/// `|f − f*| / max(1, |f*|)`.
pub fn relative_error(f: f64, f_star: f64) -> f64 {
    (f - f_star).abs() / f_star.abs().max(1.0)
}

/// Runs every configured method from one shared, seeded starting point.
/// Methods run concurrently; results do not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, LabError> {
    cfg.validate()?;
    let built = cfg.problem.build()?;
    let objective = &*built.objective;
    let x0 = cfg.start_spec().sample(objective.dim(), cfg.seed)?;
    let x0_hash = vector_hash(&x0);

    let records = cfg
        .methods
        .par_iter()
        .map(|&m| {
            let x = x0.clone();
            assert_eq!(vector_hash(&x), x0_hash, "starting point changed");
            let rec = run(objective, &x, &cfg.solver_config(m))?;
            log::info!(
                "{}: {} after {} evals, f = {:e}",
                m.label(),
                rec.status,
                rec.evals,
                rec.final_f
            );
            Ok(rec)
        })
        .collect::<Result<Vec<_>, LabError>>()?;

    Ok(ExperimentResult {
        x0,
        x0_hash,
        f_star: cfg.f_star,
        records,
    })
}

/// Files written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct OutputFiles {
    pub summary: PathBuf,
    pub start: PathBuf,
    pub traces: Vec<PathBuf>,
    pub iterates: Vec<PathBuf>,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub const SUMMARY_HEADER: [&str; 7] = [
    "method",
    "status",
    "final_f",
    "rel_err",
    "evals",
    "iterations",
    "cause",
];

pub fn write_summary<W: Write>(out: W, result: &ExperimentResult) -> Result<(), LabError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in &result.records {
        let rel = result
            .f_star
            .map(|fs| fmt_f64(relative_error(r.final_f, fs)))
            .unwrap_or_default();
        w.write_record([
            r.method.label(),
            r.status.to_string(),
            fmt_f64(r.final_f),
            rel,
            r.evals.to_string(),
            r.iterations.to_string(),
            r.cause.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<prefix>.summary.csv`, `<prefix>.x0.txt` and, per method,
/// `<prefix>.<label>.trace.csv` and `<prefix>.<label>.x.txt` (the best
/// point found).
pub fn write_outputs(result: &ExperimentResult, prefix: &Path) -> Result<OutputFiles, LabError> {
    if let Some(dir) = prefix.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let summary = with_suffix(prefix, ".summary.csv");
    write_summary(BufWriter::new(fs::File::create(&summary)?), result)?;
    let start = with_suffix(prefix, ".x0.txt");
    write_vector(&start, &result.x0)?;

    let mut traces = Vec::new();
    let mut iterates = Vec::new();
    for r in &result.records {
        let label = r.method.label();
        let t = with_suffix(prefix, &format!(".{label}.trace.csv"));
        write_trace(BufWriter::new(fs::File::create(&t)?), &r.trace)?;
        traces.push(t);
        let x = with_suffix(prefix, &format!(".{label}.x.txt"));
        write_vector(&x, &r.final_x)?;
        iterates.push(x);
    }
    Ok(OutputFiles {
        summary,
        start,
        traces,
        iterates,
    })
}
