use serde::{Deserialize, Serialize};

use super::embedding::SpectralEmbedding;
use super::separator::OrthogonalSeparator;
use crate::error::{Error, Result};
use crate::hypergraph::cut::{edge_range, threshold_sweep};
use crate::hypergraph::{CutResult, Hypergraph};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::spectral::MinimizerSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SseConfig {
    pub beta: f64,
    /// δ in the round budget ⌈48·ln(1/δ)⌉.
    pub failure_probability: f64,
    /// A round is accepted when Σ_e w_e max|X_i − X_j| ≤ constant·D·√ξ.
    pub numerator_constant: f64,
}

impl Default for SseConfig {
    fn default() -> Self {
        Self { beta: 0.99, failure_probability: 0.01, numerator_constant: 48.0 }
    }
}

impl SseConfig {
    pub fn rounds(&self) -> usize {
        (48.0 * (1.0 / self.failure_probability).ln()).ceil().max(1.0) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SseResult<T> {
    pub cut: CutResult<T>,
    /// |supp X| in the accepted round.
    pub support: usize,
    pub numerator: T,
    pub numerator_bound: T,
    /// max_s D_w(f_s).
    pub xi: T,
    /// min{√(r·log k), k·log k·log log k·√log r}·√ξ with unit constant.
    pub expansion_reference: f64,
    /// 1-based index of the accepted round.
    pub rounds: usize,
    pub alpha: f64,
}

fn lg(x: f64) -> f64 {
    x.ln().max(1.0)
}

/// Small-set expansion rounding with the default configuration.
pub fn small_set_expansion<T: Scalar>(h: &Hypergraph<T>, set: &MinimizerSet<T>, seed: u64) -> Result<SseResult<T>> {
    small_set_expansion_with(h, set, &SseConfig::default(), seed)
}

/// Embeds, samples a separator with τ = k, forms X_i = ‖u_i‖²·[i ∈ Ŝ] and sweeps X. Rounds repeat
/// until |supp X| ≤ 24n/k and the numerator bound hold.
pub fn small_set_expansion_with<T: Scalar>(
    h: &Hypergraph<T>,
    set: &MinimizerSet<T>,
    cfg: &SseConfig,
    seed: u64,
) -> Result<SseResult<T>> {
    let k = set.len();
    if k < 2 {
        return Err(Error::domain(format!("small-set expansion needs k ≥ 2 vectors, got {k}")));
    }
    if !(cfg.failure_probability > 0.0 && cfg.failure_probability < 1.0) {
        return Err(Error::domain("failure probability must lie in (0, 1)"));
    }
    let emb = SpectralEmbedding::new(h, set)?;
    let sep = OrthogonalSeparator::new(cfg.beta, k)?;
    let n = h.n();
    let xi = set.ratios.iter().copied().fold(T::zero(), T::max).max(T::zero());
    let r = h.r_max() as f64;
    let kf = k as f64;
    let d = kf / (1.0 - cfg.beta).sqrt() * lg(kf) * lg(lg(kf)) * lg(r).sqrt();
    let top = emb.norms_sq().iter().copied().fold(T::zero(), T::max);
    let slack = T::tol(1e-9) * h.edges().iter().map(|e| e.weight()).sum::<T>() * top;
    let numerator_bound = T::of(cfg.numerator_constant * d) * xi.sqrt() + slack;
    let expansion_reference = (r * lg(kf)).sqrt().min(kf * lg(kf) * lg(lg(kf)) * lg(r).sqrt()) * xi.f64().sqrt();

    let (mut empty, mut large, mut heavy) = (0usize, 0usize, 0usize);
    let rounds = cfg.rounds();
    for round in 0..rounds {
        let mut rng = stream_rng(seed, "sse", round as u64);
        let chosen = sep.sample(emb.units(), &mut rng);
        let mut x = vec![T::zero(); n];
        for &i in &chosen {
            x[i] = emb.norm_sq(i);
        }
        let support = x.iter().filter(|&&v| v > T::zero()).count();
        if support == 0 {
            empty += 1;
            continue;
        }
        if support * k > 24 * n {
            large += 1;
            continue;
        }
        let numerator: T = h
            .edges()
            .iter()
            .map(|e| {
                let (lo, hi) = edge_range(&x, e.vertices());
                e.weight() * (hi - lo)
            })
            .sum();
        if numerator > numerator_bound {
            heavy += 1;
            continue;
        }
        let cut = threshold_sweep(h, &x)?;
        return Ok(SseResult {
            cut,
            support,
            numerator,
            numerator_bound,
            xi,
            expansion_reference,
            rounds: round + 1,
            alpha: sep.alpha(),
        });
    }
    Err(Error::StochasticFailure {
        rounds,
        msg: format!("{empty} empty samples, {large} over the support cap 24n/k, {heavy} over the numerator bound"),
    })
}
