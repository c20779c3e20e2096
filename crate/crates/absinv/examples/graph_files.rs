//! Writes a graph to the on-disk JSON format, reads it back, and shows the
//! validation the loader performs. The same files drive the `absinv`
//! command line tool.
//!
//! Run with: `cargo run --example graph_files`

use absinv::graph::AbsorptionGraph;

fn main() -> absinv::Result<()> {
    // Version 1 format: vertex count, arcs as [from, to, weight] with
    // 1-based endpoints, and one positive absorption rate per vertex.
    // An undirected edge is simply both arcs listed explicitly.
    let text = r#"{
        "n": 3,
        "edges": [[1, 2, 1.0], [2, 3, 1.0], [3, 1, 2.0], [1, 3, 1.0]],
        "absorption": [1.0, 2.0, 0.5]
    }"#;

    let g = AbsorptionGraph::from_json_str(text)?;
    println!("loaded {} vertices", g.n());
    println!("adjacency (entry (i, j) = weight of arc j -> i):\n{:.1}", g.adjacency());
    println!("out-degrees {:.1}", g.out_degrees());
    println!("in-degrees  {:.1}", g.in_degrees());
    println!("balanced: {}", g.is_balanced(1e-9));

    // Serialization sorts arcs by (from, to) and keeps every weight bit for
    // bit, so load -> save -> load is the identity.
    let saved = g.to_json_string();
    let reloaded = AbsorptionGraph::from_json_str(&saved)?;
    assert_eq!(g.adjacency(), reloaded.adjacency());
    assert_eq!(g.absorption(), reloaded.absorption());
    println!("\nround trip through the format is exact; serialized form:\n{saved}");

    // The loader rejects anything the library cannot handle downstream:
    // disconnected graphs, self loops, zero or negative weights, absent or
    // nonpositive absorption rates, out-of-range endpoints, unknown keys.
    println!("\nrejected inputs:");
    let bad = [
        (r#"{"n": 2, "edges": [[1, 2, 1.0]], "absorption": [1, 1]}"#, "one-way pair"),
        (r#"{"n": 2, "edges": [[1, 1, 1.0], [1, 2, 1], [2, 1, 1]], "absorption": [1, 1]}"#, "self loop"),
        (r#"{"n": 2, "edges": [[1, 2, 0.0], [2, 1, 1]], "absorption": [1, 1]}"#, "zero weight"),
        (r#"{"n": 2, "edges": [[1, 2, 1.0], [2, 1, 1]], "absorption": [1, -1]}"#, "negative rate"),
        (r#"{"n": 2, "edges": [[1, 2, 1.0], [2, 1, 1]], "absorption": [1, 1], "title": "x"}"#, "unknown key"),
        (r#"{"n": 2, "edges": [[1, 3, 1.0], [2, 1, 1]], "absorption": [1, 1]}"#, "endpoint out of range"),
    ];
    for (text, label) in bad {
        match AbsorptionGraph::from_json_str(text) {
            Err(e) => println!("  {label}: {e}"),
            Ok(_) => println!("  {label}: unexpectedly accepted"),
        }
    }
    Ok(())
}
