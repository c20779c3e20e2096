//! Exhaustive enumeration of spanning in-forests, forest matrix polynomials,
//! and the combinatorial construction of the absorption inverse.
//!
//! An in-forest is a set of arcs in which every vertex has at most one
//! outgoing arc and no cycle exists; vertices without an outgoing arc are the
//! roots, and every tree of the forest converges to its root. Enumeration is
//! exponential and refuses graphs above [`ENUMERATION_CAP`] vertices. Its
//! whole point is to be an independent check on the linear-algebra routes, so
//! it never calls into them.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::{self, AbsorptionGraph};

/// Largest vertex count accepted for exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 9;

/// One spanning in-forest. Roots are implicit: a vertex is a root exactly
/// when it has no outgoing arc in `arcs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InForest {
    /// Arcs as `(from, to)` pairs, 0-based, at most one per `from` vertex.
    pub arcs: Vec<(usize, usize)>,
    /// Product of the arc weights; 1 for the empty forest.
    pub weight: f64,
}

impl InForest {
    /// The root vertices: those without an outgoing arc.
    pub fn roots(&self, n: usize) -> Vec<usize> {
        let mut has_out = vec![false; n];
        for &(from, _) in &self.arcs {
            has_out[from] = true;
        }
        (0..n).filter(|&v| !has_out[v]).collect()
    }
}

/// All spanning in-forests with exactly `k` arcs, in a canonical order
/// (vertices choose root-or-arc in index order).
pub fn enumerate_in_forests(g: &AbsorptionGraph, k: usize) -> Result<Vec<InForest>> {
    let n = g.n();
    if n > ENUMERATION_CAP {
        return Err(Error::SizeLimit { n, cap: ENUMERATION_CAP });
    }
    if k > n - 1 {
        return Err(Error::Precondition(format!(
            "forest arc count k = {k} must be at most n - 1 = {}",
            n - 1
        )));
    }
    let adj = g.adjacency();
    let targets = out_targets(adj);
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    assign(adj, &targets, 0, k, 0, &mut succ, &mut out);
    Ok(out)
}

fn out_targets(adj: &Array2<f64>) -> Vec<Vec<usize>> {
    let n = adj.nrows();
    (0..n)
        .map(|j| (0..n).filter(|&i| adj[[i, j]] > 0.0).collect())
        .collect()
}

fn assign(
    adj: &Array2<f64>,
    targets: &[Vec<usize>],
    vertex: usize,
    k: usize,
    used: usize,
    succ: &mut Vec<Option<usize>>,
    out: &mut Vec<InForest>,
) {
    let n = succ.len();
    if vertex == n {
        if used == k {
            out.push(collect_forest(adj, succ));
        }
        return;
    }
    let remaining = n - vertex - 1;
    // root choice, viable only if later vertices can still supply k arcs
    if used + remaining >= k {
        assign(adj, targets, vertex + 1, k, used, succ, out);
    }
    if used < k {
        for &t in &targets[vertex] {
            if !closes_cycle(succ, vertex, t) {
                succ[vertex] = Some(t);
                assign(adj, targets, vertex + 1, k, used + 1, succ, out);
                succ[vertex] = None;
            }
        }
    }
}

/// Walking the successor chain from `t` hits `from` exactly when adding the
/// arc `from -> t` would close a cycle. The chain is finite because the
/// already-chosen arcs are acyclic.
fn closes_cycle(succ: &[Option<usize>], from: usize, t: usize) -> bool {
    let mut cur = t;
    loop {
        if cur == from {
            return true;
        }
        match succ[cur] {
            Some(next) => cur = next,
            None => return false,
        }
    }
}

fn collect_forest(adj: &Array2<f64>, succ: &[Option<usize>]) -> InForest {
    let mut arcs = Vec::new();
    let mut weight = 1.0;
    for (from, chosen) in succ.iter().enumerate() {
        if let Some(to) = *chosen {
            arcs.push((from, to));
            weight *= adj[[to, from]];
        }
    }
    InForest { arcs, weight }
}

/// Root of each vertex in a forest given as a successor map.
fn roots_of(succ: &[Option<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut root = vec![usize::MAX; n];
    for v in 0..n {
        if root[v] != usize::MAX {
            continue;
        }
        let mut chain = vec![v];
        let mut cur = v;
        while let Some(next) = succ[cur] {
            if root[next] != usize::MAX {
                cur = root[next];
                break;
            }
            chain.push(next);
            cur = next;
        }
        let r = if succ[cur].is_none() { cur } else { root[cur] };
        for w in chain {
            root[w] = r;
        }
    }
    root
}

fn succ_map(n: usize, arcs: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut succ = vec![None; n];
    for &(from, to) in arcs {
        succ[from] = Some(to);
    }
    succ
}

/// Sums in pairwise order to keep accumulation error logarithmic in length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1..=8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Forest matrices `Q_0 .. Q_{n-1}` and their traces of total weight
/// `sigma_0 .. sigma_{n-1}`.
///
/// `Q_k[[i, j]]` is the total weight of k-arc in-forests in which vertex `j`
/// lies in a tree converging to root `i`; `sigma_k` is the total weight of
/// all k-arc in-forests. `Q_0 = I` and `sigma_0 = 1`.
#[derive(Debug, Clone)]
pub struct ForestFamily {
    pub q: Vec<Array2<f64>>,
    pub sigma: Vec<f64>,
}

pub fn forest_matrices(g: &AbsorptionGraph) -> Result<ForestFamily> {
    let n = g.n();
    let mut q = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for k in 0..n {
        let forests = enumerate_in_forests(g, k)?;
        let weights: Vec<f64> = forests.iter().map(|f| f.weight).collect();
        sigma.push(pairwise_sum(&weights));
        let mut cells: Vec<Vec<f64>> = vec![Vec::new(); n * n];
        for f in &forests {
            let succ = succ_map(n, &f.arcs);
            let roots = roots_of(&succ);
            for (j, &r) in roots.iter().enumerate() {
                cells[r * n + j].push(f.weight);
            }
        }
        let mut qk = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                qk[[i, j]] = pairwise_sum(&cells[i * n + j]);
            }
        }
        q.push(qk);
    }
    Ok(ForestFamily { q, sigma })
}

/// Residual of the parametric forest identity
/// `(I + tau L)^{-1} = sum_k tau^k Q_k / sigma(tau)`
/// with `sigma(tau) = sum_k tau^k sigma_k`.
pub fn parametric_forest_identity_check(g: &AbsorptionGraph, tau: f64) -> Result<f64> {
    let n = g.n();
    let family = forest_matrices(g)?;
    let bundle = graph::laplacian(g)?;
    let mut shifted = Array2::<f64>::eye(n);
    shifted += &(tau * &bundle.l);
    let lhs = crate::numerics::invert(&shifted)?;

    let mut sigma_tau = 0.0;
    let mut numer = Array2::<f64>::zeros((n, n));
    let mut tk = 1.0;
    for k in 0..n {
        sigma_tau += tk * family.sigma[k];
        numer += &(tk * &family.q[k]);
        tk *= tau;
    }
    if sigma_tau.abs() < 1e-300 {
        return Err(Error::Singular(format!(
            "forest polynomial vanishes at tau = {tau}"
        )));
    }
    numer /= sigma_tau;
    Ok(crate::numerics::inf_norm(&(&lhs - &numer)))
}

/// Reusable forest-formula evaluator.
///
/// Enumeration runs once on the graph's arc structure; evaluating the
/// absorption inverse for a given absorption vector then only rescales forest
/// weights. The forests of the absorption-scaled graph are the forests of the
/// original graph with each arc out of `j` carrying weight `a/d_j`, so a
/// forest's scaled weight is its plain weight divided by the product of `d_j`
/// over its non-root vertices.
pub struct ForestOracle {
    n: usize,
    u: Array1<f64>,
    trees: Vec<OracleForest>,
    two_forests: Vec<OracleForest>,
}

struct OracleForest {
    weight: f64,
    non_roots: u32,
    root_of: Vec<u8>,
}

impl ForestOracle {
    pub fn new(g: &AbsorptionGraph) -> Result<Self> {
        let n = g.n();
        let bundle = graph::laplacian(g)?;
        let trees = oracle_forests(g, n - 1)?;
        let two_forests = oracle_forests(g, n - 2)?;
        Ok(ForestOracle { n, u: bundle.u, trees, two_forests })
    }

    /// Absorption inverse by the forest formula, at absorption vector `d`.
    ///
    /// Entry `(i, j)` is the scaled weight of two-tree forests sending `j`
    /// to root `i`, normalized by `d_i` and the scaled tree weight, minus the
    /// rank-one term `sigma~_{n-2} u_i / (sigma~_{n-1} dbar)`.
    pub fn absorption_inverse(&self, d: &Array1<f64>) -> Result<Array2<f64>> {
        let n = self.n;
        if d.len() != n || d.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
            return Err(Error::Precondition(
                "absorption vector must be positive with matching length".into(),
            ));
        }
        let scale = |f: &OracleForest| {
            let mut w = f.weight;
            for j in 0..n {
                if f.non_roots & (1 << j) != 0 {
                    w /= d[j];
                }
            }
            w
        };

        // Neumaier compensated sums: enumeration order is canonical, so the
        // result is deterministic.
        let mut sigma_trees = Neumaier::new();
        for f in &self.trees {
            sigma_trees.add(scale(f));
        }
        let sigma_trees = sigma_trees.total();
        if !(sigma_trees.is_finite() && sigma_trees > 0.0) {
            return Err(Error::Numerical(
                "scaled spanning tree weight is not positive".into(),
            ));
        }

        let mut sigma_two = Neumaier::new();
        let mut q = vec![Neumaier::new(); n * n];
        for f in &self.two_forests {
            let w = scale(f);
            sigma_two.add(w);
            for (j, &r) in f.root_of.iter().enumerate() {
                q[r as usize * n + j].add(w);
            }
        }
        let sigma_two = sigma_two.total();

        let dbar = d.dot(&self.u);
        let mut ld = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            let correction = sigma_two * self.u[i] / (sigma_trees * dbar);
            for j in 0..n {
                ld[[i, j]] = q[i * n + j].total() / (d[i] * sigma_trees) - correction;
            }
        }
        Ok(ld)
    }
}

fn oracle_forests(g: &AbsorptionGraph, k: usize) -> Result<Vec<OracleForest>> {
    let n = g.n();
    let forests = enumerate_in_forests(g, k)?;
    Ok(forests
        .into_iter()
        .map(|f| {
            let succ = succ_map(n, &f.arcs);
            let roots = roots_of(&succ);
            let mut mask = 0u32;
            for &(from, _) in &f.arcs {
                mask |= 1 << from;
            }
            OracleForest {
                weight: f.weight,
                non_roots: mask,
                root_of: roots.iter().map(|&r| r as u8).collect(),
            }
        })
        .collect())
}

/// Absorption inverse computed purely from forest enumeration on the
/// absorption-scaled graph. Independent of every linear-algebra route.
pub fn absorption_inverse_forest_oracle(g: &AbsorptionGraph) -> Result<Array2<f64>> {
    ForestOracle::new(g)?.absorption_inverse(g.absorption())
}

#[derive(Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn new() -> Self {
        Neumaier { sum: 0.0, comp: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
