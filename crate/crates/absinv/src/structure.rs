//! Structural analyses built on top of the absorption inverse: directed
//! distances, centrality scores, the quasi-stationary distribution, and
//! sign-based spectral bipartitioning.
//!
//! The distance and centrality constructions carry provable guarantees only
//! on balanced graphs, so the corresponding functions refuse unbalanced
//! input instead of returning numbers without meaning.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::{laplacian, AbsorptionGraph, LaplacianBundle};
use crate::inverses::{absorption_inverse, Route};
use crate::numerics::{self, EigenPair};

/// Slack tolerance for the metric inequalities.
const METRIC_TOL: f64 = 1e-9;

/// Seed for the partition eigensolver; fixed so runs are reproducible.
const PARTITION_SEED: u64 = 0x9a27_4c11;

/// Directed distance table derived from the absorption inverse.
///
/// `r[[j, i]]` is the distance from `j` to `i` and equals `k - ld[[i, j]]`
/// off the diagonal; the diagonal is zero. Row index = source vertex.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub r: Array2<f64>,
    /// The constant `max_i ld[[i, i]]` the distances are measured against.
    pub k: f64,
}

/// Builds the directed distance table from an absorption inverse.
///
/// Only balanced graphs come with a proof that the result is a directed
/// metric, so `balanced` must be true.
pub fn distance_matrix(ld: &Array2<f64>, balanced: bool) -> Result<DistanceMatrix> {
    if !balanced {
        return Err(Error::NotBalanced(
            "directed distances are only metric on balanced graphs".into(),
        ));
    }
    let n = ld.nrows();
    let k = (0..n).map(|i| ld[[i, i]]).fold(f64::NEG_INFINITY, f64::max);
    let r = Array2::from_shape_fn((n, n), |(j, i)| if i == j { 0.0 } else { k - ld[[i, j]] });
    Ok(DistanceMatrix { r, k })
}

/// Outcome of the exhaustive metric checks.
#[derive(Debug, Clone, Default)]
pub struct MetricReport {
    /// Human-readable violation descriptions; empty on success.
    pub violations: Vec<String>,
    /// Smallest triangle slack `r(j,i) + r(i,k) - r(j,k)` over all triples.
    pub min_triangle_slack: f64,
    /// Smallest four-point slack `ld_ii - ld_ij - ld_ki + ld_kj`.
    pub min_four_point_slack: f64,
}

impl MetricReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively verifies that a distance table is a directed metric:
/// zero diagonal, positive off-diagonal, triangle inequality over all
/// triples, and the four-point inequality on the inverse itself.
pub fn verify_directed_metric(dm: &DistanceMatrix, ld: &Array2<f64>) -> MetricReport {
    let n = dm.r.nrows();
    let mut report = MetricReport {
        violations: Vec::new(),
        min_triangle_slack: f64::INFINITY,
        min_four_point_slack: f64::INFINITY,
    };
    for i in 0..n {
        if dm.r[[i, i]] != 0.0 {
            report
                .violations
                .push(format!("diagonal entry ({i},{i}) is {}, not 0", dm.r[[i, i]]));
        }
        for j in 0..n {
            if i != j && dm.r[[j, i]] <= 0.0 {
                report
                    .violations
                    .push(format!("distance from {j} to {i} is {} <= 0", dm.r[[j, i]]));
            }
        }
    }
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                let slack = dm.r[[j, i]] + dm.r[[i, k]] - dm.r[[j, k]];
                report.min_triangle_slack = report.min_triangle_slack.min(slack);
                if slack < -METRIC_TOL {
                    report.violations.push(format!(
                        "triangle violation via {i}: r({j},{k}) exceeds r({j},{i}) + r({i},{k}) by {:.3e}",
                        -slack
                    ));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let slack = ld[[i, i]] - ld[[i, j]] - ld[[k, i]] + ld[[k, j]];
                report.min_four_point_slack = report.min_four_point_slack.min(slack);
                if slack < -METRIC_TOL {
                    report.violations.push(format!(
                        "four-point violation at ({i},{j},{k}): slack {:.3e}",
                        slack
                    ));
                }
            }
        }
    }
    report
}

/// Commute-style symmetric metric of a matrix:
/// `C(i, j) = y_ii + y_jj - y_ij - y_ji`.
///
/// The output is symmetric with a zero diagonal, and is invariant under
/// adding any row-constant matrix to `y`.
pub fn c_metric(y: &Array2<f64>) -> Array2<f64> {
    let n = y.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| y[[i, i]] + y[[j, j]] - y[[i, j]] - y[[j, i]])
}

/// Centrality scores (row sums of the absorption inverse) with their
/// induced ranking.
#[derive(Debug, Clone)]
pub struct CentralityVector {
    pub scores: Array1<f64>,
    /// Vertex indices sorted by descending score; ties broken by ascending
    /// index.
    pub ranking: Vec<usize>,
}

/// Absorption-aware centrality: score of vertex `i` is the `i`-th row sum
/// of the absorption inverse. Defined for balanced graphs; scores can be
/// negative, and only the relative ranking carries meaning.
pub fn pagerank(ld: &Array2<f64>, balanced: bool) -> Result<CentralityVector> {
    if !balanced {
        return Err(Error::NotBalanced(
            "centrality scores are only defined on balanced graphs".into(),
        ));
    }
    let n = ld.nrows();
    let scores = Array1::from_shape_fn(n, |i| ld.row(i).sum());
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    Ok(CentralityVector { scores, ranking })
}

/// First-order quasi-stationary distribution of the absorbing process:
/// `p = normalize((I + (dbar / alpha) X) u)` with `alpha` the induced
/// 1-norm of the Laplacian.
///
/// Returns the normalized vector and a flag that is true when the
/// unnormalized vector had a nonpositive entry, which signals that the
/// perturbation regime behind the formula is violated. The vector is
/// returned either way rather than clamped.
pub fn quasi_stationary(
    bundle: &LaplacianBundle,
    d: &Array1<f64>,
    ld: &Array2<f64>,
) -> (Array1<f64>, bool) {
    let alpha = numerics::one_norm(&bundle.l);
    let dbar = d.dot(&bundle.u);
    let mut p = &bundle.u + &(ld.dot(&bundle.u) * (dbar / alpha));
    let warn = p.iter().any(|&x| x <= 0.0);
    let total = p.sum();
    p /= total;
    (p, warn)
}

/// Sign-based bipartition of the vertex set.
#[derive(Debug, Clone)]
pub struct Partition {
    /// Group label (1 or 2) per vertex.
    pub membership: Vec<u8>,
    /// Leading eigenpair of the symmetrized inverse the split came from.
    pub eigenpair: EigenPair,
    /// True when one group is empty (no sign change in the eigenvector).
    pub degenerate: bool,
}

impl Partition {
    /// Vertices of a group, 0-based.
    pub fn group(&self, label: u8) -> Vec<usize> {
        self.membership
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| (m == label).then_some(i))
            .collect()
    }

    /// True when the two partitions cut the vertex set the same way,
    /// ignoring which side is called group 1.
    pub fn same_split(&self, other: &Partition) -> bool {
        if self.membership.len() != other.membership.len() {
            return false;
        }
        let direct = self.membership == other.membership;
        let swapped = self
            .membership
            .iter()
            .zip(&other.membership)
            .all(|(&a, &b)| a != b);
        direct || swapped
    }
}

/// Splits vertices by the sign of the leading eigenvector of
/// `ld + ldᵀ`. The eigenvector sign is canonicalized (first component
/// above noise level is made positive) so results are reproducible;
/// entries with `s_i >= 0` go to group 1.
pub fn partition(ld: &Array2<f64>) -> Result<Partition> {
    let n = ld.nrows();
    let s = ld + &ld.t();
    let mut pair = numerics::symmetric_leading_eigpair(&s, 1e-10, 500_000, PARTITION_SEED)?;
    if let Some(lead) = pair.vector.iter().find(|x| x.abs() > 1e-12) {
        if *lead < 0.0 {
            pair.vector.mapv_inplace(|x| -x);
        }
    }
    let membership: Vec<u8> = (0..n)
        .map(|i| if pair.vector[i] >= 0.0 { 1 } else { 2 })
        .collect();
    let ones = membership.iter().filter(|&&m| m == 1).count();
    let degenerate = ones == 0 || ones == n;
    Ok(Partition { membership, eigenpair: pair, degenerate })
}

/// Recomputes the partition across a range of absorption rates at one
/// vertex. `vertex` is a 0-based index into the absorption vector; the
/// template supplies every other rate. Returns `(value, partition)` pairs
/// in input order.
pub fn partition_sweep(
    g: &AbsorptionGraph,
    d_template: &Array1<f64>,
    vertex: usize,
    values: &[f64],
) -> Result<Vec<(f64, Partition)>> {
    let n = g.n();
    if vertex >= n {
        return Err(Error::Precondition(format!(
            "sweep vertex {vertex} out of range for {n} vertices"
        )));
    }
    if d_template.len() != n {
        return Err(Error::Precondition(format!(
            "absorption template has length {}, expected {n}",
            d_template.len()
        )));
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Precondition(
            "sweep values must be positive and finite".into(),
        ));
    }
    let bundle = laplacian(g)?;
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        let mut d = d_template.clone();
        d[vertex] = v;
        let set = absorption_inverse(&bundle, &d, Route::Bottleneck)?;
        out.push((v, partition(&set.ld)?));
    }
    Ok(out)
}
