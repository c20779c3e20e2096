//! Computes the absorption inverse of a small directed graph by every
//! algebraic route and shows that the routes agree with each other and
//! with the defining conditions.
//!
//! Run with: `cargo run --example absorption_inverse`

use absinv::graph::{laplacian, AbsorptionGraph};
use absinv::inverses::{
    absorption_inverse, cross_route_check, inverse_set_full, Route,
};
use ndarray::{array, Array2};

fn print_matrix(name: &str, m: &Array2<f64>) {
    println!("{name} =");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:9.5}", m[[i, j]])).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() -> absinv::Result<()> {
    // A directed triangle with one shortcut. adjacency[[i, j]] holds the
    // weight of the arc j -> i, so column j lists where j points.
    let adjacency = array![
        [0.0, 0.0, 2.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
    ];
    // Each vertex also leaks probability mass out of the graph at its own
    // absorption rate.
    let absorption = array![1.0, 2.0, 0.5];
    let g = AbsorptionGraph::new(adjacency, absorption)?;

    let bundle = laplacian(&g)?;
    println!("stationary kernel u = {:.6}", bundle.u);
    println!("mean absorption dbar = {:.6}\n", g.absorption().dot(&bundle.u));

    // The default route sandwiches the inverse of the leading principal
    // submatrix of L between two projections.
    let set = absorption_inverse(&bundle, g.absorption(), Route::Bottleneck)?;
    print_matrix("L^d (bottleneck route)", &set.ld);

    // The inverse is characterized by five conditions; their residuals
    // should all sit at rounding level.
    let res = set.residuals(&bundle, g.absorption());
    println!("\ndefining condition residuals:");
    println!("  X L X = X        : {:.3e}", res.two_inverse);
    println!("  L X L = L        : {:.3e}", res.one_inverse);
    println!("  X L = I - UD     : {:.3e}", res.left_projection);
    println!("  L X = I - DU     : {:.3e}", res.right_projection);
    println!("  X D u = 0        : {:.3e}", res.kernel);

    // Three more constructions reach the same matrix: sandwiching the group
    // inverse, sandwiching the pseudoinverse, and inverting a rank-one
    // bordered matrix. The cross check compares all four pairwise.
    let report = cross_route_check(&bundle, g.absorption(), 1e-6)?;
    println!(
        "\nfour routes agree to {:.3e} (worst pair: {} vs {})",
        report.max_deviation, report.worst_pair.0, report.worst_pair.1
    );

    // inverse_set_full also returns the companion inverses the routes pass
    // through, in case the caller wants them.
    let full = inverse_set_full(&bundle, g.absorption())?;
    print_matrix("\ngroup inverse of L", full.group.as_ref().unwrap());

    // The absorption inverse only sees the direction of d, not its size:
    // doubling every rate leaves it unchanged.
    let doubled = g.with_absorption(g.absorption() * 2.0)?;
    let set2 = absorption_inverse(&laplacian(&doubled)?, doubled.absorption(), Route::Bottleneck)?;
    let drift = (&set2.ld - &set.ld).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    println!("\nafter doubling all rates, L^d moves by {drift:.3e} (scale invariance)");
    Ok(())
}
