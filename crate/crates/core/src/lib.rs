//! Exact continuous-time quantum walks on generalized hypercubes.
//!
//! The crate covers Z2^n-circulants (hypercubes, hypercubes with an added
//! matching, bunkbed graphs), complete graphs and their Cartesian products
//! (Hamming graphs). Walks are evolved exactly through the Walsh-Hadamard
//! diagonalization, with a dense eigendecomposition oracle for
//! cross-checking, and [`mixing`] detects instantaneous uniform mixing.
//! [`verify`] bundles one checker per mixing or non-mixing result.

pub mod error;
pub mod graph;
pub mod mixing;
pub mod verify;
pub mod walk;
pub mod z2n;

pub use error::{Error, Result};
pub use graph::{
    bunkbed_spec, dense_adjacency, eta_cube_spec, hamming_spec, hypercube_spec, DenseAdjacency, GraphKind,
    GraphSpec, Scaling,
};
pub use mixing::{distribution, phat, phat_direct, scan, tv_distance, MixingReport, ProbabilityDist};
pub use walk::{
    circulant_walk, complete_graph_walk, dense_walk_oracle, evolve, product_walk, AmplitudeVector, Evolver,
    InitialState,
};
pub use z2n::{BooleanFunction, GroupElement};
