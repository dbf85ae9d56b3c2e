//! Surface-embedded directed graphs with a deterministic lexicographic
//! cost perturbation scheme, and the multiple-source shortest path
//! engines it enables.
//!
//! The crate is organized bottom-up:
//!
//! * [`embedding`] — rotation-system representation, faces, duality, genus;
//! * [`homology`] — tree-cotree decompositions and integer homology signatures;
//! * [`perturb`] — drainages and perturbed cost vectors with exact lex arithmetic;
//! * [`sssp`] — holiest single-source shortest path trees;
//! * [`mssp`] — the reference (recompute-per-pivot) and staged linear-time
//!   multiple-source shortest path engines;
//! * [`distances`] — streamed unperturbed distances over monotone correspondences;
//! * [`oracles`] — instance generators and brute-force ground truth.

pub mod distances;
pub mod embedding;
pub mod homology;
pub mod mssp;
pub mod oracles;
pub mod perturb;
pub mod sssp;

pub use embedding::{DartId, EdgeId, EmbeddedGraph, FaceId, VertexId};
pub use perturb::{CostTable, CostVec, Variant};
