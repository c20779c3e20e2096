//! Recomputes the absorption inverse by brute-force enumeration of spanning
//! in-forests and matches it against the algebraic construction. The forest
//! route is combinatorial, exact up to summation rounding, and shares no
//! code with the linear-algebra routes, which makes it a useful referee.
//!
//! Run with: `cargo run --example forest_certificates`

use absinv::forests::{
    absorption_inverse_forest_oracle, enumerate_in_forests, forest_matrices,
    parametric_forest_identity_check,
};
use absinv::graph::{laplacian, AbsorptionGraph};
use absinv::inverses::{absorption_inverse, Route};
use ndarray::array;

fn main() -> absinv::Result<()> {
    // Directed triangle 1 -> 2 -> 3 -> 1 with a chord 1 -> 3.
    let adjacency = array![
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
    ];
    let g = AbsorptionGraph::new(adjacency, array![1.0, 2.0, 1.0])?;
    let n = g.n();

    // A spanning in-forest with k arcs: no cycles, every vertex reaches a
    // root along its unique outgoing path. Vertices with out-degree zero
    // inside the forest are its roots.
    for k in 0..n {
        let forests = enumerate_in_forests(&g, k)?;
        let weight: f64 = forests.iter().map(|f| f.weight).sum();
        println!("in-forests with {k} arcs: {:2} of total weight {weight:.3}", forests.len());
        for f in &forests {
            let arcs: Vec<String> = f
                .arcs
                .iter()
                .map(|&(from, to)| format!("{}->{}", from + 1, to + 1))
                .collect();
            println!(
                "    weight {:5.2}  arcs [{}]  roots {:?}",
                f.weight,
                arcs.join(", "),
                f.roots(n).iter().map(|&r| r + 1).collect::<Vec<_>>()
            );
        }
    }

    // Forest counts assemble into matrices Q_k whose rows classify forests
    // by which root the column vertex ends up attached to. Their normalized
    // sum is the forest route to the absorption inverse, taken on the
    // absorption-scaled graph.
    let family = forest_matrices(&g.absorption_scaled())?;
    let sigmas: Vec<String> = family.sigma.iter().map(|s| format!("{s:.4}")).collect();
    println!("\nforest matrices of the scaled graph: sigma_k = [{}]", sigmas.join(", "));

    let oracle = absorption_inverse_forest_oracle(&g)?;
    let bundle = laplacian(&g)?;
    let algebraic = absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    let dev = (&oracle - &algebraic.ld)
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    println!("forest route vs bottleneck route: max deviation {dev:.3e}");

    // The forest family also satisfies a one-parameter matrix identity that
    // ties consecutive Q_k together; its residual is another certificate.
    for tau in [0.0, 1.0, 10.0] {
        let r = parametric_forest_identity_check(&g, tau)?;
        println!("parametric identity residual at tau = {tau:4.1}: {r:.3e}");
    }

    // Enumeration is exponential, so the oracle refuses graphs beyond a
    // small size cap rather than running forever.
    let big = absinv::sample::random_strongly_connected(10, 0.4, 7);
    match absorption_inverse_forest_oracle(&big) {
        Err(e) => println!("\n10 vertices: refused as expected ({e})"),
        Ok(_) => println!("\n10 vertices: unexpectedly accepted"),
    }
    Ok(())
}
