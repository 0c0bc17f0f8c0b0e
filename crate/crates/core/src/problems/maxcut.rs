use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Matrix, Objective, OracleError, OracleResponse, Vector};

use super::eig::EigDecomp;
use super::ProblemError;

/// Weighted undirected edge with 1-based endpoints, as read from a graph file.
pub type Edge = (usize, usize, f64);

/// Graph Laplacian `L = D − W`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Laplacian {
    n: usize,
    /// Merged weights keyed by 0-based `(i, j)` with `i < j`.
    weights: BTreeMap<(usize, usize), f64>,
}

impl Laplacian {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of undirected edges after merging duplicates.
    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    /// Off-diagonal nonzeros of the (symmetric) adjacency matrix.
    pub fn adjacency_nnz(&self) -> usize {
        2 * self.weights.values().filter(|&&w| w != 0.0).count()
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (&(i, j), &w) in &self.weights {
            d[i] += w;
            d[j] += w;
        }
        d
    }

    pub fn to_dense(&self) -> Matrix {
        let mut l = Matrix::zeros(self.n, self.n);
        for (&(i, j), &w) in &self.weights {
            l[(i, j)] -= w;
            l[(j, i)] -= w;
            l[(i, i)] += w;
            l[(j, j)] += w;
        }
        l
    }

    /// Edges back in 1-based form, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        self.weights
            .iter()
            .map(|(&(i, j), &w)| (i + 1, j + 1, w))
            .collect()
    }
}

/// Builds `L = D − W` from 1-based edges; duplicate edges add up.
pub fn laplacian_from_edges(edges: &[Edge], n: usize) -> Result<Laplacian, ProblemError> {
    let mut weights = BTreeMap::new();
    for &(i, j, w) in edges {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(ProblemError::OutOfRange { i, j, n });
        }
        if i == j {
            return Err(ProblemError::SelfLoop(i));
        }
        if !w.is_finite() {
            return Err(ProblemError::Invalid(format!(
                "edge ({i}, {j}) has weight {w}"
            )));
        }
        let key = if i < j {
            (i - 1, j - 1)
        } else {
            (j - 1, i - 1)
        };
        *weights.entry(key).or_insert(0.0) += w;
    }
    Ok(Laplacian { n, weights })
}

/// Reads a Gset-style graph: header `N M`, then `M` lines `i j [w]`.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_gset<R: BufRead>(reader: R) -> Result<(usize, Vec<Edge>), ProblemError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let parse_err = |msg: String| ProblemError::Parse {
            line: lineno + 1,
            msg,
        };
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(format!("bad integer {s:?}: {e}")))
        };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(parse_err(format!("expected header \"N M\", got {text:?}")));
                }
                header = Some((int(fields[0])?, int(fields[1])?));
            }
            Some(_) => {
                if !(2..=3).contains(&fields.len()) {
                    return Err(parse_err(format!("expected \"i j [w]\", got {text:?}")));
                }
                let w = match fields.get(2) {
                    Some(s) => s
                        .parse::<f64>()
                        .map_err(|e| parse_err(format!("bad weight {s:?}: {e}")))?,
                    None => 1.0,
                };
                edges.push((int(fields[0])?, int(fields[1])?, w));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| ProblemError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(ProblemError::Parse {
            line: 0,
            msg: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

pub fn write_gset<W: Write>(mut out: W, n: usize, edges: &[Edge]) -> std::io::Result<()> {
    writeln!(out, "{n} {}", edges.len())?;
    for &(i, j, w) in edges {
        if w == 1.0 {
            writeln!(out, "{i} {j}")?;
        } else {
            writeln!(out, "{i} {j} {w}")?;
        }
    }
    Ok(())
}

/// Exact-penalty dual of the Max Cut relaxation,
/// `f(y) = 𝟏ᵀy + α max{λ_max(σL − Diag y), 0}` with `σ = 1/4` by default.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutInstance {
    laplacian: Laplacian,
    alpha: f64,
    laplacian_quarter: bool,
    dense: Matrix,
}

impl MaxCutInstance {
    /// `alpha ≥ N` is required; below that the penalty is not exact.
    pub fn new(laplacian: Laplacian, alpha: f64) -> Result<Self, ProblemError> {
        Self::with_convention(laplacian, alpha, true)
    }

    /// `laplacian_quarter = false` uses `L − Diag y` instead of `L/4 − Diag y`.
    pub fn with_convention(
        laplacian: Laplacian,
        alpha: f64,
        laplacian_quarter: bool,
    ) -> Result<Self, ProblemError> {
        let n = laplacian.order();
        if n == 0 {
            return Err(ProblemError::Invalid("graph has no vertices".into()));
        }
        if !(alpha >= n as f64) || !alpha.is_finite() {
            return Err(ProblemError::Invalid(format!(
                "penalty α = {alpha} below the exactness bound N = {n}"
            )));
        }
        if laplacian.degrees().iter().any(|&d| d < 0.0) {
            return Err(ProblemError::Invalid(
                "Laplacian has a negative diagonal entry".into(),
            ));
        }
        let scale = if laplacian_quarter { 0.25 } else { 1.0 };
        let dense = laplacian.to_dense() * scale;
        Ok(Self {
            laplacian,
            alpha,
            laplacian_quarter,
            dense,
        })
    }

    pub fn order(&self) -> usize {
        self.laplacian.order()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn laplacian(&self) -> &Laplacian {
        &self.laplacian
    }

    pub fn laplacian_quarter(&self) -> bool {
        self.laplacian_quarter
    }

    /// `M(y) = σL − Diag y`, the negated dual slack.
    pub fn m(&self, y: &Vector) -> Matrix {
        let mut m = self.dense.clone();
        for i in 0..self.order() {
            m[(i, i)] -= y[i];
        }
        m
    }

    /// Dual slack `Z(y) = Diag y − σL`.
    pub fn slack(&self, y: &Vector) -> Matrix {
        -self.m(y)
    }
}

pub fn eval_maxcut_penalty(
    inst: &MaxCutInstance,
    y: &Vector,
) -> Result<OracleResponse, OracleError> {
    let eig = EigDecomp::new(&inst.m(y))?;
    let lmax = eig.lambda_max();
    let mut g = Vector::from_element(inst.order(), 1.0);
    if lmax > 0.0 {
        let q = eig.top_vector();
        g -= q.component_mul(&q) * inst.alpha;
    }
    Ok(OracleResponse {
        f: y.sum() + inst.alpha * lmax.max(0.0),
        g,
    })
}

impl Objective for MaxCutInstance {
    fn dim(&self) -> usize {
        self.order()
    }

    fn eval(&self, y: &Vector) -> Result<OracleResponse, OracleError> {
        self.check_dim(y)?;
        eval_maxcut_penalty(self, y)
    }
}

/// Complete graph on `n` vertices with unit weights.
pub fn complete_graph(n: usize) -> Vec<Edge> {
    let mut e = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            e.push((i, j, 1.0));
        }
    }
    e
}

/// Cycle `1 – 2 – … – n – 1` with unit weights.
pub fn cycle_graph(n: usize) -> Vec<Edge> {
    (1..=n).map(|i| (i, i % n + 1, 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2(alpha: f64) -> MaxCutInstance {
        MaxCutInstance::new(laplacian_from_edges(&complete_graph(2), 2).unwrap(), alpha).unwrap()
    }

    #[test]
    fn single_edge_laplacian() {
        let l = laplacian_from_edges(&[(1, 2, 1.0)], 2).unwrap().to_dense();
        assert_eq!(l, Matrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn cycle_laplacian() {
        let l = laplacian_from_edges(&cycle_graph(4), 4).unwrap().to_dense();
        for i in 0..4 {
            assert_eq!(l[(i, i)], 2.0);
            assert_eq!(l.row(i).sum(), 0.0);
            assert_eq!(l[(i, (i + 1) % 4)], -1.0);
            assert_eq!(l[(i, (i + 2) % 4)], 0.0);
        }
    }

    #[test]
    fn duplicates_sum_and_errors() {
        let l = laplacian_from_edges(&[(1, 2, 1.0), (2, 1, 2.0)], 2).unwrap();
        assert_eq!(l.to_dense()[(0, 1)], -3.0);
        assert_eq!(l.edge_count(), 1);
        assert!(matches!(
            laplacian_from_edges(&[(1, 3, 1.0)], 2),
            Err(ProblemError::OutOfRange { .. })
        ));
        assert!(matches!(
            laplacian_from_edges(&[(0, 1, 1.0)], 2),
            Err(ProblemError::OutOfRange { .. })
        ));
        assert!(matches!(
            laplacian_from_edges(&[(2, 2, 1.0)], 2),
            Err(ProblemError::SelfLoop(2))
        ));
    }

    #[test]
    fn k2_penalty_values() {
        let inst = k2(4.0);
        let r = inst.eval(&Vector::from_element(2, 0.25)).unwrap();
        assert!((r.f - 1.5).abs() < 1e-15);
        let r = inst.eval(&Vector::from_element(2, 0.5)).unwrap();
        assert!((r.f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn c4_at_ones() {
        let l = laplacian_from_edges(&cycle_graph(4), 4).unwrap();
        for alpha in [4.0, 8.0, 100.0] {
            let inst = MaxCutInstance::new(l.clone(), alpha).unwrap();
            let r = inst.eval(&Vector::from_element(4, 1.0)).unwrap();
            assert!((r.f - 4.0).abs() < 1e-13, "alpha {alpha}: f = {}", r.f);
        }
    }

    #[test]
    fn printed_convention_drops_the_quarter() {
        let l = laplacian_from_edges(&complete_graph(2), 2).unwrap();
        let inst = MaxCutInstance::with_convention(l, 4.0, false).unwrap();
        // λ_max([[1,-1],[-1,1]] - I) = 1
        let r = inst.eval(&Vector::from_element(2, 1.0)).unwrap();
        assert!((r.f - 6.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_bound_enforced() {
        let l = laplacian_from_edges(&cycle_graph(4), 4).unwrap();
        assert!(MaxCutInstance::new(l, 3.9).is_err());
    }

    #[test]
    fn gset_parse_and_write() {
        let text = "# a comment\n4 3\n1 2\n2 3 2.5\n\n3 4 1\n";
        let (n, edges) = parse_gset(text.as_bytes()).unwrap();
        assert_eq!(n, 4);
        assert_eq!(edges, vec![(1, 2, 1.0), (2, 3, 2.5), (3, 4, 1.0)]);
        let mut buf = Vec::new();
        write_gset(&mut buf, n, &edges).unwrap();
        let (n2, edges2) = parse_gset(buf.as_slice()).unwrap();
        assert_eq!((n2, edges2), (n, edges));
    }

    #[test]
    fn gset_errors() {
        assert!(parse_gset("".as_bytes()).is_err());
        assert!(parse_gset("3 2\n1 2\n".as_bytes()).is_err());
        assert!(parse_gset("3 1\n1 x\n".as_bytes()).is_err());
        assert!(parse_gset("3\n".as_bytes()).is_err());
        assert!(parse_gset("3 1\n1 2 3 4\n".as_bytes()).is_err());
    }
}
