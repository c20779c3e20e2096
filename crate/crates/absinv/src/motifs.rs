//! Closed-form absorption inverses for four standard motifs: the complete
//! graph, the star, the linear path, and the directed cycle. Each formula
//! is exact and serves as an independent oracle for the general
//! construction routes.
//!
//! Conventions baked into the formulas:
//! - the star's hub is the last vertex;
//! - the directed cycle runs `1 -> 2 -> ... -> n -> 1`;
//! - every edge carries the same weight `a`;
//! - the star normalizer uses the sum of all absorption rates (hub
//!   included). The source derivation abbreviates this sum in a way that
//!   reads as leaf-only, but the leaf-only reading contradicts its own
//!   three-vertex cross-check and breaks the kernel condition, so the full
//!   sum is used here.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::AbsorptionGraph;

/// The four motif families with closed-form inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotifKind {
    Complete,
    Star,
    Path,
    Dicycle,
}

impl MotifKind {
    pub fn name(self) -> &'static str {
        match self {
            MotifKind::Complete => "complete",
            MotifKind::Star => "star",
            MotifKind::Path => "path",
            MotifKind::Dicycle => "dicycle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(MotifKind::Complete),
            "star" => Ok(MotifKind::Star),
            "path" => Ok(MotifKind::Path),
            "dicycle" => Ok(MotifKind::Dicycle),
            other => Err(Error::Validation(format!(
                "unknown motif kind {other:?}; expected complete, star, path, or dicycle"
            ))),
        }
    }
}

/// A fully specified motif: kind, size, uniform edge weight, absorption.
#[derive(Debug, Clone)]
pub struct MotifSpec {
    pub kind: MotifKind,
    pub n: usize,
    pub a: f64,
    pub d: Array1<f64>,
}

impl MotifSpec {
    pub fn new(kind: MotifKind, n: usize, a: f64, d: Array1<f64>) -> Result<Self> {
        let min_n = match kind {
            MotifKind::Complete | MotifKind::Path => 2,
            MotifKind::Star | MotifKind::Dicycle => 3,
        };
        if n < min_n {
            return Err(Error::Validation(format!(
                "{} motif needs at least {min_n} vertices, got {n}",
                kind.name()
            )));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Validation(format!("edge weight must be positive, got {a}")));
        }
        if d.len() != n {
            return Err(Error::Validation(format!(
                "absorption vector has length {}, expected {n}",
                d.len()
            )));
        }
        if d.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::Validation(
                "absorption rates must be positive and finite".into(),
            ));
        }
        Ok(MotifSpec { kind, n, a, d })
    }

    /// Closed-form absorption inverse of this motif.
    pub fn ld(&self) -> Array2<f64> {
        match self.kind {
            MotifKind::Complete => complete_ld(self),
            MotifKind::Star => star_ld(self),
            MotifKind::Path => path_ld(self),
            MotifKind::Dicycle => dicycle_ld(self),
        }
    }
}

/// Builds the motif as an explicit graph, suitable for the general routes
/// and for writing out as a graph file.
pub fn motif_graph(spec: &MotifSpec) -> Result<AbsorptionGraph> {
    let n = spec.n;
    let a = spec.a;
    let mut adj = Array2::<f64>::zeros((n, n));
    match spec.kind {
        MotifKind::Complete => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        adj[[i, j]] = a;
                    }
                }
            }
        }
        MotifKind::Star => {
            let hub = n - 1;
            for leaf in 0..n - 1 {
                adj[[leaf, hub]] = a;
                adj[[hub, leaf]] = a;
            }
        }
        MotifKind::Path => {
            for i in 0..n - 1 {
                adj[[i, i + 1]] = a;
                adj[[i + 1, i]] = a;
            }
        }
        MotifKind::Dicycle => {
            for i in 0..n {
                adj[[(i + 1) % n, i]] = a; // arc i -> i+1
            }
        }
    }
    AbsorptionGraph::new(adj, spec.d.clone())
}

/// Complete graph on `n` vertices, uniform weight `a`:
/// `X_ij = (1/(an)) (delta_ij - (d_i + d_j)/S + dᵀd/S²)` with `S` the rate
/// sum.
pub fn complete_ld(spec: &MotifSpec) -> Array2<f64> {
    let n = spec.n;
    let s: f64 = spec.d.sum();
    let dd: f64 = spec.d.dot(&spec.d);
    Array2::from_shape_fn((n, n), |(i, j)| {
        let delta = if i == j { 1.0 } else { 0.0 };
        (delta - (spec.d[i] + spec.d[j]) / s + dd / (s * s)) / (spec.a * n as f64)
    })
}

/// Star with the hub last. With `S` the full rate sum and `q` the sum of
/// squared leaf rates, `a S² X` is:
///
/// ```text
/// q + S² - 2 S d_i    (leaf diagonal)
/// q - S (d_i + d_j)   (distinct leaves)
/// q - S d_leaf        (hub row or hub column)
/// q                   (hub diagonal)
/// ```
pub fn star_ld(spec: &MotifSpec) -> Array2<f64> {
    let n = spec.n;
    let hub = n - 1;
    let s: f64 = spec.d.sum();
    let q: f64 = (0..n - 1).map(|i| spec.d[i] * spec.d[i]).sum();
    let denom = spec.a * s * s;
    Array2::from_shape_fn((n, n), |(i, j)| {
        let v = if i == hub && j == hub {
            q
        } else if i == hub {
            q - s * spec.d[j]
        } else if j == hub {
            q - s * spec.d[i]
        } else if i == j {
            q + s * s - 2.0 * s * spec.d[i]
        } else {
            q - s * (spec.d[i] + spec.d[j])
        };
        v / denom
    })
}

/// Linear path `1 - 2 - ... - n`, uniform weight `a`. Derived by expanding
/// the projected bottleneck matrix `M_kl = (n - max(k,l))/a`; the `1/a`
/// factor belongs to every term.
pub fn path_ld(spec: &MotifSpec) -> Array2<f64> {
    let n = spec.n;
    let s: f64 = spec.d.sum();
    // prefix[i] = d_1 + ... + d_i (1-based)
    let mut prefix = vec![0.0; n + 1];
    for k in 1..=n {
        prefix[k] = prefix[k - 1] + spec.d[k - 1];
    }
    // tail[i] = sum_{k > i} (n - k) d_k
    let mut tail = vec![0.0; n + 2];
    for k in (1..=n).rev() {
        tail[k] = tail[k + 1] + (n - k) as f64 * spec.d[k - 1];
    }
    let sum_p2: f64 = (1..n).map(|m| prefix[m] * prefix[m]).sum();
    Array2::from_shape_fn((n, n), |(i0, j0)| {
        let (i, j) = (i0 + 1, j0 + 1);
        let row_term = ((n - i) as f64 * prefix[i] + tail[i + 1]) / s;
        let col_term = ((n - j) as f64 * prefix[j] + tail[j + 1]) / s;
        ((n - i.max(j)) as f64 - row_term - col_term + sum_p2 / (s * s)) / spec.a
    })
}

/// Directed cycle `1 -> 2 -> ... -> n -> 1`, uniform weight `a`:
/// `X_ij = (1/(aS²)) sum_{l=1}^{n-1} (S delta_il - d_l)(S [j <= l] - P_l)`
/// with `P_l` the rate prefix sums.
pub fn dicycle_ld(spec: &MotifSpec) -> Array2<f64> {
    let n = spec.n;
    let s: f64 = spec.d.sum();
    let mut prefix = vec![0.0; n + 1];
    for k in 1..=n {
        prefix[k] = prefix[k - 1] + spec.d[k - 1];
    }
    Array2::from_shape_fn((n, n), |(i0, j0)| {
        let (i, j) = (i0 + 1, j0 + 1);
        let mut acc = 0.0;
        for l in 1..n {
            let left = if i == l { s - spec.d[l - 1] } else { -spec.d[l - 1] };
            let right = if j <= l { s - prefix[l] } else { -prefix[l] };
            acc += left * right;
        }
        acc / (spec.a * s * s)
    })
}
