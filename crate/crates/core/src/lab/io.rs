use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::solvers::TraceRow;
use crate::Vector;

use super::LabError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const TRACE_HEADER: [&str; 6] = ["iter", "cum_evals", "f", "gnorm", "step", "note"];

pub fn write_trace<W: Write>(out: W, trace: &[TraceRow]) -> Result<(), LabError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for row in trace {
        w.write_record([
            row.iter.to_string(),
            row.cum_evals.to_string(),
            fmt_f64(row.f),
            fmt_f64(row.gnorm),
            fmt_f64(row.step),
            row.note.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Flat text vector: one coordinate per line.
pub fn write_vector(path: &Path, x: &Vector) -> Result<(), LabError> {
    let mut s = String::with_capacity(24 * x.len());
    for v in x.iter() {
        s.push_str(&fmt_f64(*v));
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

/// Reads a flat text vector. Blank lines and `#` comments are skipped.
pub fn read_vector(path: &Path) -> Result<Vector, LabError> {
    let file = fs::File::open(path)
        .map_err(|e| LabError::Config(format!("cannot open {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|e| {
            LabError::Config(format!(
                "{}:{}: bad number {t:?}: {e}",
                path.display(),
                i + 1
            ))
        })?;
        values.push(v);
    }
    Ok(Vector::from_vec(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::TraceNote;

    #[test]
    fn vector_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        let x = Vector::from_column_slice(&[0.1, -1e-300, 3.0e17, 1.0 / 3.0]);
        write_vector(&p, &x).unwrap();
        assert_eq!(read_vector(&p).unwrap(), x);
    }

    #[test]
    fn trace_format() {
        let rows = [TraceRow {
            iter: 0,
            cum_evals: 1,
            f: 0.1,
            gnorm: 2.0,
            step: 0.0,
            note: TraceNote::Iterate,
        }];
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "iter,cum_evals,f,gnorm,step,note\n\
             0,1,1.0000000000000001e-1,2.0000000000000000e0,0.0000000000000000e0,iterate\n"
        );
    }
}
