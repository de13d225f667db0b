//! The diffusion-induced Laplacian and the processes it drives.

mod diffusion;
mod discrete;
mod operator;
mod rate;

pub use diffusion::{
    cut_from_slow_mixing, mixing_time_lower_bound, mixing_time_upper_bound, simulate_diffusion,
    simulate_stochastic, slow_mixing_cut_bound, slow_mixing_start, DiffusionConfig, Trajectory,
};
pub use discrete::{diameter_check, discretized_step, DiameterReport};
pub use operator::{apply_laplacian, even_split_laplacian, rayleigh_quotient, transient_component};
pub use rate::{compute_rate, compute_rate_with, EdgeActivity, RateConfig, RateResult};
