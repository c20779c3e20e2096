//! Weighted digraphs with per-vertex absorption, their Laplacians, and the
//! on-disk graph format.
//!
//! Conventions used throughout the crate:
//!
//! * `adjacency[[i, j]]` is the weight of the arc from vertex `j` to vertex
//!   `i`. Column `j` therefore lists the out-weights of `j`, and the
//!   out-degree vector is the vector of column sums.
//! * The Laplacian is `L = W - A` with `W = diag(out-degrees)`, so columns of
//!   `L` sum to zero.
//! * `u` denotes the positive kernel basis of `L` normalized to sum 1. For a
//!   balanced graph `u` is uniform.
//!
//! Vertices are 0-based in the API and 1-based in files and command output.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics;

/// Relative tolerance for the balance test.
pub const DEFAULT_BALANCE_TOL: f64 = 1e-9;

/// A strongly connected weighted digraph with a positive absorption rate at
/// every vertex. Construction validates; instances are immutable.
#[derive(Debug, Clone)]
pub struct AbsorptionGraph {
    adjacency: Array2<f64>,
    absorption: Array1<f64>,
}

/// On-disk form, format version 1: a JSON object
/// `{"n": ..., "edges": [[from, to, weight], ...], "absorption": [...]}`
/// with 1-based endpoints. Unknown keys are rejected.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    absorption: Vec<f64>,
}

impl AbsorptionGraph {
    /// Builds a graph from an adjacency matrix (`adjacency[[i, j]]` = weight
    /// of the arc `j -> i`) and a positive absorption vector.
    pub fn new(adjacency: Array2<f64>, absorption: Array1<f64>) -> Result<Self> {
        let (r, c) = adjacency.dim();
        if r != c {
            return Err(Error::Validation(format!("adjacency must be square, got {r}x{c}")));
        }
        let n = r;
        if n < 2 {
            return Err(Error::Validation(format!("graph needs at least 2 vertices, got {n}")));
        }
        if absorption.len() != n {
            return Err(Error::Validation(format!(
                "absorption vector has length {}, expected {n}",
                absorption.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let w = adjacency[[i, j]];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Validation(format!(
                        "arc weight at ({i}, {j}) must be finite and nonnegative, got {w}"
                    )));
                }
            }
            if adjacency[[i, i]] != 0.0 {
                return Err(Error::Validation(format!("self loop at vertex {}", i + 1)));
            }
        }
        for (i, &d) in absorption.iter().enumerate() {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::Validation(format!(
                    "absorption rate at vertex {} must be positive and finite, got {d}",
                    i + 1
                )));
            }
        }
        if !is_strongly_connected(&adjacency) {
            return Err(Error::Validation("graph is not strongly connected".into()));
        }
        Ok(AbsorptionGraph { adjacency, absorption })
    }

    /// Parses the version 1 JSON graph format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    /// Reads the version 1 JSON graph format from a reader.
    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_reader(r).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    /// Reads the version 1 JSON graph format from a filesystem path.
    pub fn from_path<P: AsRef<std::path::Path>>(path: P) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    fn from_file(file: GraphFile) -> Result<Self> {
        let n = file.n;
        if n < 2 {
            return Err(Error::Validation(format!("graph needs at least 2 vertices, got {n}")));
        }
        let mut adjacency = Array2::<f64>::zeros((n, n));
        for &(from, to, w) in &file.edges {
            if from < 1 || from > n || to < 1 || to > n {
                return Err(Error::Validation(format!(
                    "edge [{from}, {to}] has an endpoint outside 1..={n}"
                )));
            }
            if from == to {
                return Err(Error::Validation(format!("self loop at vertex {from}")));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::Validation(format!(
                    "edge [{from}, {to}] has weight {w}; weights must be positive (omit absent arcs)"
                )));
            }
            let (i, j) = (to - 1, from - 1);
            if adjacency[[i, j]] != 0.0 {
                return Err(Error::Validation(format!("duplicate arc [{from}, {to}]")));
            }
            adjacency[[i, j]] = w;
        }
        if file.absorption.len() != n {
            return Err(Error::Validation(format!(
                "absorption vector has length {}, expected {n}",
                file.absorption.len()
            )));
        }
        Self::new(adjacency, Array1::from_vec(file.absorption))
    }

    /// Serializes to the version 1 JSON format. Arcs appear sorted by
    /// (from, to); weights survive a round trip bit for bit.
    pub fn to_json_string(&self) -> String {
        let n = self.n();
        let mut edges = Vec::new();
        for from in 0..n {
            for to in 0..n {
                let w = self.adjacency[[to, from]];
                if w > 0.0 {
                    edges.push((from + 1, to + 1, w));
                }
            }
        }
        edges.sort_by_key(|&(f, t, _)| (f, t));
        // one edge per line, shortest round-trip floats
        let num = |x: f64| serde_json::to_string(&x).expect("finite float");
        let mut out = String::new();
        out.push_str(&format!("{{\n  \"n\": {n},\n  \"edges\": [\n"));
        for (k, &(from, to, w)) in edges.iter().enumerate() {
            let sep = if k + 1 < edges.len() { "," } else { "" };
            out.push_str(&format!("    [{from}, {to}, {}]{sep}\n", num(w)));
        }
        let rates: Vec<String> = self.absorption.iter().map(|&x| num(x)).collect();
        out.push_str(&format!("  ],\n  \"absorption\": [{}]\n}}\n", rates.join(", ")));
        out
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &Array2<f64> {
        &self.adjacency
    }

    pub fn absorption(&self) -> &Array1<f64> {
        &self.absorption
    }

    /// Out-degree vector (column sums of the adjacency matrix).
    pub fn out_degrees(&self) -> Array1<f64> {
        let n = self.n();
        Array1::from_shape_fn(n, |j| self.adjacency.column(j).sum())
    }

    /// In-degree vector (row sums of the adjacency matrix).
    pub fn in_degrees(&self) -> Array1<f64> {
        let n = self.n();
        Array1::from_shape_fn(n, |i| self.adjacency.row(i).sum())
    }

    /// True when `|in_i - out_i| <= tol * max(1, out_i)` at every vertex.
    pub fn is_balanced(&self, tol: f64) -> bool {
        let ins = self.in_degrees();
        let outs = self.out_degrees();
        ins.iter()
            .zip(outs.iter())
            .all(|(&i, &o)| (i - o).abs() <= tol * o.max(1.0))
    }

    /// The same graph with every arc weight out of vertex `j` divided by
    /// `d_j`. The result carries a placeholder absorption of all ones: the
    /// scaling has already consumed the rates.
    pub fn absorption_scaled(&self) -> Self {
        let n = self.n();
        let mut scaled = self.adjacency.clone();
        for j in 0..n {
            let d = self.absorption[j];
            for i in 0..n {
                scaled[[i, j]] /= d;
            }
        }
        AbsorptionGraph {
            adjacency: scaled,
            absorption: Array1::ones(n),
        }
    }

    /// Copy of this graph with a different absorption vector.
    pub fn with_absorption(&self, absorption: Array1<f64>) -> Result<Self> {
        Self::new(self.adjacency.clone(), absorption)
    }
}

/// Reads a version 1 graph file.
pub fn load_graph<R: std::io::Read>(reader: R) -> Result<AbsorptionGraph> {
    AbsorptionGraph::from_reader(reader)
}

fn is_strongly_connected(adjacency: &Array2<f64>) -> bool {
    reaches_all(adjacency, false) && reaches_all(adjacency, true)
}

/// Depth-first reachability from vertex 0 over arcs (or reversed arcs).
/// Arc `j -> i` exists when `adjacency[[i, j]] > 0`.
fn reaches_all(adjacency: &Array2<f64>, reversed: bool) -> bool {
    let n = adjacency.nrows();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(j) = stack.pop() {
        for i in 0..n {
            let w = if reversed { adjacency[[j, i]] } else { adjacency[[i, j]] };
            if w > 0.0 && !seen[i] {
                seen[i] = true;
                count += 1;
                stack.push(i);
            }
        }
    }
    count == n
}

/// The Laplacian of a graph together with the derived objects every
/// construction route needs: out-degrees, the kernel basis `u`, the mean
/// absorption `dbar = dᵀu`, and the projection factor `U = u 1ᵀ / dbar`.
///
/// `dbar` and `u_proj` are taken at the graph's own absorption vector;
/// operations that sweep other absorption vectors recompute them from `u`.
#[derive(Debug, Clone)]
pub struct LaplacianBundle {
    pub l: Array2<f64>,
    pub out_degrees: Array1<f64>,
    pub u: Array1<f64>,
    pub dbar: f64,
    pub u_proj: Array2<f64>,
    pub balanced: bool,
}

/// Builds the Laplacian bundle for a validated graph. Fails only when the
/// reduced kernel solve degenerates, which a validated strongly connected
/// graph cannot trigger except through extreme weight scales.
pub fn laplacian(g: &AbsorptionGraph) -> Result<LaplacianBundle> {
    let n = g.n();
    let w = g.out_degrees();
    let mut l = -g.adjacency().clone();
    for i in 0..n {
        l[[i, i]] += w[i];
    }
    let u = stationary_basis(&l)?;
    let d = g.absorption();
    let dbar = d.dot(&u);
    let mut u_proj = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            u_proj[[i, j]] = u[i] / dbar;
        }
    }
    Ok(LaplacianBundle {
        l,
        out_degrees: w,
        u,
        dbar,
        u_proj,
        balanced: g.is_balanced(DEFAULT_BALANCE_TOL),
    })
}

/// Positive kernel basis of a Laplacian, normalized to sum 1.
///
/// Deletes the last row and column, solves the reduced system against the
/// negated trailing column, appends 1 and normalizes. For a strongly
/// connected graph the reduced matrix is nonsingular and the solution is
/// entrywise positive.
pub fn stationary_basis(l: &Array2<f64>) -> Result<Array1<f64>> {
    let n = l.nrows();
    if n < 2 || l.ncols() != n {
        return Err(Error::Precondition("Laplacian must be square with n >= 2".into()));
    }
    let m = n - 1;
    let mut reduced = Array2::<f64>::zeros((m, m));
    let mut rhs = Array2::<f64>::zeros((m, 1));
    for i in 0..m {
        for j in 0..m {
            reduced[[i, j]] = l[[i, j]];
        }
        rhs[[i, 0]] = -l[[i, n - 1]];
    }
    let x = numerics::lu_solve(&reduced, &rhs).map_err(|e| {
        Error::Numerical(format!("stationary basis: reduced Laplacian solve failed ({e})"))
    })?;
    let mut u = Array1::<f64>::zeros(n);
    for i in 0..m {
        u[i] = x[[i, 0]];
    }
    u[n - 1] = 1.0;
    let total: f64 = u.sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Numerical(
            "stationary basis: kernel vector failed to normalize".into(),
        ));
    }
    Ok(u / total)
}
