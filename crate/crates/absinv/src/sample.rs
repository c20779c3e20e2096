//! Deterministic generators for test graphs.
//!
//! Every generator is a pure function of its seed, so test corpora are
//! reproducible. Strong connectivity is guaranteed by construction: a random
//! Hamiltonian cycle is always embedded before extra arcs are sprinkled in.

use ndarray::{Array1, Array2};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::AbsorptionGraph;

/// Random strongly connected digraph on `n` vertices. `density` is the
/// probability of each extra arc beyond the embedded random cycle; weights
/// are uniform in (0.2, 2.0) and absorption rates uniform in (0.3, 3.0).
pub fn random_strongly_connected(n: usize, density: f64, seed: u64) -> AbsorptionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut a = Array2::<f64>::zeros((n, n));
    for k in 0..n {
        let from = order[k];
        let to = order[(k + 1) % n];
        a[[to, from]] = rng.gen_range(0.2..2.0);
    }
    for from in 0..n {
        for to in 0..n {
            if from != to && a[[to, from]] == 0.0 && rng.gen_bool(density) {
                a[[to, from]] = rng.gen_range(0.2..2.0);
            }
        }
    }
    let d = random_absorption(n, 0.3, 3.0, rng.gen());
    AbsorptionGraph::new(a, d).expect("generated graph is valid by construction")
}

/// Random balanced strongly connected digraph: a symmetric connected base
/// plus a few superimposed directed cycles. Both ingredients preserve the
/// in-weight equals out-weight property at every vertex.
pub fn random_balanced(n: usize, seed: u64) -> AbsorptionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Array2::<f64>::zeros((n, n));
    // symmetric ring for connectivity
    for i in 0..n {
        let j = (i + 1) % n;
        let w = rng.gen_range(0.2..2.0);
        a[[j, i]] += w;
        a[[i, j]] += w;
    }
    // symmetric chords
    for i in 0..n {
        for j in (i + 2)..n {
            if (i, j) != (0, n - 1) && rng.gen_bool(0.3) {
                let w = rng.gen_range(0.2..2.0);
                a[[j, i]] += w;
                a[[i, j]] += w;
            }
        }
    }
    // directed circulations
    let cycles = rng.gen_range(0..3);
    for _ in 0..cycles {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let len = rng.gen_range(3..=n.max(3)).min(n);
        let w = rng.gen_range(0.2..1.0);
        for k in 0..len {
            let from = order[k];
            let to = order[(k + 1) % len];
            if from != to {
                a[[to, from]] += w;
            }
        }
    }
    let d = random_absorption(n, 0.3, 3.0, rng.gen());
    AbsorptionGraph::new(a, d).expect("generated graph is valid by construction")
}

/// Random absorption vector with entries uniform in `(lo, hi)`.
pub fn random_absorption(n: usize, lo: f64, hi: f64, seed: u64) -> Array1<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array1::from_shape_fn(n, |_| rng.gen_range(lo..hi))
}
