//! Rounding spectral embeddings into vertex sets: orthogonal separators, small-set expansion,
//! multiway partitions and sparsest cut with general demands.

mod demand_sdp;
mod demands;
mod embedding;
mod multiway;
mod separator;
mod sse;

pub use demand_sdp::{solve_demand_sdp, DemandSdpConfig, DemandSdpSolution};
pub use demands::{
    demand_sparsity_bruteforce, frechet_embedding, load_demands, parse_demands, sparsest_cut_demands,
    sparsest_cut_demands_with, Demand, DemandConfig, DemandCut, DemandInstance, TerminalEmbedding,
};
pub use embedding::{mu_measure, nu_measure, threshold_by_norm, SpectralEmbedding};
pub use multiway::{multiway_partition, required_parts, MultiwayResult, MULTIWAY_ROUNDS};
pub use separator::{orthogonal_separator, OrthogonalSeparator};
pub use sse::{small_set_expansion, small_set_expansion_with, SseConfig, SseResult};
