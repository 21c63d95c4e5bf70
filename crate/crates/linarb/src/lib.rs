//! Decompose the edge set of a (near-)regular graph into a small number of
//! edge-disjoint linear forests.
//!
//! A *linear forest* is a forest in which every connected component is a
//! path. The *linear arboricity* of a graph is the minimum number of
//! edge-disjoint linear forests needed to cover all of its edges. For a
//! Δ-regular graph this is at least ⌈(Δ+1)/2⌉, and Vizing's theorem gives
//! Δ+1 as a ceiling; the pipelines in this crate aim for the low end of
//! that window on regular inputs.
//!
//! The crate is organised around:
//!
//! - [`graph`]: simple undirected graphs, linear forests, decomposition
//!   validation, the lower bound, and embedding into a regular supergraph.
//! - [`gen`]: graph generators (random regular, circulants, complete
//!   graphs) and a power-iteration estimate of the second-largest absolute
//!   adjacency eigenvalue.
//! - [`lll`]: a generic resample-until-good engine over independently
//!   resamplable variables and declared bad events.
//! - [`partition`]: balanced vertex partitions with per-vertex degree
//!   windows into every part, built with the resampling engine.
//! - [`color`]: proper edge colorings (Misra–Gries), bipartite matching
//!   layers, perfect-matching peeling, and Hamiltonian path decompositions
//!   of complete graphs.
//! - [`rfactor`]: r-regular spanning subgraphs of balanced bipartite
//!   graphs via max-flow, with a violating-cut witness on infeasibility.
//! - [`nibble`]: semi-random partial edge coloring with palette tracking
//!   and short-cycle counters relative to reference matchings.
//! - [`pipeline`]: the end-to-end decomposition pipelines and the
//!   cycle-breaking step.
//! - [`oracle`]: exact linear arboricity by exhaustive search on tiny
//!   graphs.
//! - [`cli`]: the batch command line surface.
//!
//! Every pipeline output is re-verified with [`graph::verify_decomposition`]
//! before it is returned; a failure there is a bug, never a degraded result.

pub mod bipartite;
pub mod cli;
pub mod color;
pub mod error;
pub mod gen;
pub mod graph;
pub mod lll;
pub mod nibble;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod rfactor;
pub mod seeding;

pub use error::{Error, Result};
pub use graph::{EdgeSet, ForestDecomposition, Graph, LinearForest, Matching};
