//! Spectral toolkit for weighted hypergraphs built on the diffusion-induced non-linear Laplacian.

pub mod densest;
pub mod error;
pub mod fixtures;
pub mod hypergraph;
pub mod laplacian;
pub mod partition;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{
    discrepancy_ratio, expansion, hypergraph_expansion_bruteforce, load_hypergraph, parse_hypergraph,
    reduce_vertex_expansion, sweep_cut, vertex_expansion, write_hypergraph, CutResult, Hyperedge,
    Hypergraph, SimpleGraph, Space, SpaceVector, SweepMode,
};
pub use scalar::Scalar;

pub type Hypergraph64 = Hypergraph<f64>;
pub type Hypergraph32 = Hypergraph<f32>;
pub type SpaceVector64 = SpaceVector<f64>;
pub type SpaceVector32 = SpaceVector<f32>;
pub type CutResult64 = CutResult<f64>;
