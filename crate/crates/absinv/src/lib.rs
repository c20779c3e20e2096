#![forbid(unsafe_code)]

//! Absorption inverses of graph Laplacians.
//!
//! A strongly connected weighted digraph whose vertices absorb mass at
//! per-vertex rates `d` defines an absorbing diffusion. The central object
//! of this crate is the absorption inverse `X` of the pair `(L, d)`: the
//! unique generalized inverse of the Laplacian `L` adapted to the
//! absorption-weighted decomposition of state space. It plays the role the
//! group inverse plays for ergodic chains, and it degrades gracefully to
//! that case: when all rates are equal, `X` is the group inverse of `L`.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | graph type, validation, file format, Laplacian assembly |
//! | [`inverses`] | four algebraic construction routes and identity checks |
//! | [`forests`] | spanning-forest enumeration and the combinatorial route |
//! | [`structure`] | distances, centrality, quasi-stationary mass, partitioning |
//! | [`motifs`] | closed forms on complete, star, path, and cycle graphs |
//! | [`numerics`] | dense LU, pseudoinverse, eigenpair and radius estimates |
//! | [`sample`] | seeded random graph generators for tests and examples |
//! | [`cli`] | command-line front end over the library |
//!
//! # Quick start
//!
//! ```
//! use absinv::graph::{laplacian, AbsorptionGraph};
//! use absinv::inverses::{absorption_inverse, Route};
//! use ndarray::array;
//!
//! // 1 -- 2 -- 3 undirected path, rates (1, 2, 3)
//! let adjacency = array![
//!     [0.0, 1.0, 0.0],
//!     [1.0, 0.0, 1.0],
//!     [0.0, 1.0, 0.0],
//! ];
//! let graph = AbsorptionGraph::new(adjacency, array![1.0, 2.0, 3.0])?;
//! let bundle = laplacian(&graph)?;
//! let set = absorption_inverse(&bundle, graph.absorption(), Route::Bottleneck)?;
//! assert!((set.ld[[0, 1]] - 1.0 / 9.0).abs() < 1e-12);
//! # Ok::<(), absinv::Error>(())
//! ```
//!
//! # Examples
//!
//! The `examples/` directory is the guided tour; each file is a runnable
//! walkthrough of one capability (`cargo run --example <name>`):
//!
//! | Example | Shows |
//! |---------|-------|
//! | `absorption_inverse` | the inverse, its defining conditions, route agreement |
//! | `graph_files` | the on-disk JSON format and its validation |
//! | `directed_distances` | the induced directed metric and its verification |
//! | `centrality` | absorption-aware scores, rankings, quasi-stationary mass |
//! | `partitioning` | spectral sign splits and how absorption moves them |
//! | `absorption_sweep` | bracketing the rate where a split flips |
//! | `forest_certificates` | the combinatorial route as an independent referee |
//! | `resolvent_series` | resolvent identities, Laurent expansion, deviations |
//! | `motif_formulas` | closed forms on complete, star, path, cycle graphs |
//!
//! The same operations are scriptable through the `absinv` binary; see the
//! [`cli`] module.

pub mod cli;
pub mod error;
pub mod forests;
pub mod graph;
pub mod inverses;
pub mod motifs;
pub mod numerics;
pub mod sample;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{laplacian, AbsorptionGraph, LaplacianBundle};
pub use inverses::{absorption_inverse, inverse_set_full, InverseSet, Route};
