//! Ranks vertices of a balanced digraph by the row sums of the absorption
//! inverse and shows how per-vertex absorption rates move the ranking.
//!
//! Run with: `cargo run --example centrality`

use absinv::graph::{laplacian, AbsorptionGraph};
use absinv::inverses::{absorption_inverse, Route};
use absinv::structure::{pagerank, quasi_stationary};
use ndarray::{Array1, Array2};

/// Undirected star on seven vertices, hub last. Undirected here means one
/// arc each way, which makes the digraph balanced.
fn star7(absorption: Array1<f64>) -> absinv::Result<AbsorptionGraph> {
    let n = 7;
    let hub = n - 1;
    let mut adjacency = Array2::<f64>::zeros((n, n));
    for leaf in 0..hub {
        adjacency[[hub, leaf]] = 1.0;
        adjacency[[leaf, hub]] = 1.0;
    }
    AbsorptionGraph::new(adjacency, absorption)
}

fn show(label: &str, g: &AbsorptionGraph) -> absinv::Result<()> {
    let bundle = laplacian(g)?;
    let set = absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    let c = pagerank(&set.ld, bundle.balanced)?;
    println!("{label}");
    for (rank, &v) in c.ranking.iter().enumerate() {
        println!("  #{} vertex {} score {:+.5}", rank + 1, v + 1, c.scores[v]);
    }

    // The same inverse also yields the quasi-stationary profile: where a
    // walker is likely to sit conditioned on not having been absorbed yet.
    let (p, warn) = quasi_stationary(&bundle, g.absorption(), &set.ld);
    println!("  quasi-stationary profile {:.4}{}", p, if warn { "  (small-rate warning)" } else { "" });
    Ok(())
}

fn main() -> absinv::Result<()> {
    // With equal rates everywhere, symmetry forces all scores equal: the
    // hub enjoys no advantage because every trip through the star passes
    // through it anyway.
    show("uniform absorption:", &star7(Array1::ones(7))?)?;
    println!("  (all scores vanish here; the order among them is rounding noise)");

    // Raising one leaf's absorption rate makes it matter more: walkers
    // vanish there, so the network feels its pull. Vertex 2 gets rate 10,
    // vertex 1 gets rate 5, the rest stay at 1.
    let mut d = Array1::<f64>::ones(7);
    d[0] = 5.0;
    d[1] = 10.0;
    println!();
    show("rates 5 and 10 on leaves 1 and 2:", &star7(d)?)?;

    println!();
    println!("the ranking lists scores in descending order; a strongly absorbing");
    println!("vertex drains the walk and ends up with the smallest score, at the");
    println!("bottom of the list.");
    Ok(())
}
