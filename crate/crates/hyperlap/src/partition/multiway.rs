use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::embedding::{mu_measure, threshold_by_norm, SpectralEmbedding};
use super::separator::OrthogonalSeparator;
use crate::error::{Error, Result};
use crate::hypergraph::{CutResult, Hypergraph};
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::spectral::MinimizerSet;

/// Rounds of the whole sampling procedure before giving up.
pub const MULTIWAY_ROUNDS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiwayResult<T> {
    /// Non-empty disjoint sets in order of increasing expansion.
    pub parts: Vec<CutResult<T>>,
    /// μ of the merged set each part was thresholded from.
    pub merged_measures: Vec<T>,
    pub required: usize,
    /// Separator samples per round.
    pub samples: usize,
    /// 1-based index of the successful round.
    pub rounds: usize,
    pub alpha: f64,
    pub beta: f64,
    pub tau: usize,
}

/// ⌊(1 − ε)k⌋.
pub fn required_parts(k: usize, eps: f64) -> usize {
    ((1.0 - eps) * k as f64 + 1e-9).floor().max(0.0) as usize
}

/// Samples T = ⌈2·ln(4n)/α⌉ separators (β = 1 − ε/72, τ = ⌈16k/ε⌉), keeps those with
/// μ ≤ 1 + ε/4, makes them disjoint in sampling order, merges them to μ ≥ 1/4 and thresholds each
/// merged set by ‖u_i‖².
pub fn multiway_partition<T: Scalar>(
    h: &Hypergraph<T>,
    set: &MinimizerSet<T>,
    eps: f64,
    seed: u64,
) -> Result<MultiwayResult<T>> {
    let k = set.len();
    if !(eps < 1.0 && eps * k as f64 >= 1.0 - 1e-12) {
        return Err(Error::domain(format!("ε = {eps} must satisfy 1/k ≤ ε < 1 with k = {k}")));
    }
    let emb = SpectralEmbedding::new(h, set)?;
    let tau = (16.0 * k as f64 / eps).ceil() as usize;
    let beta = 1.0 - eps / 72.0;
    let sep = OrthogonalSeparator::new(beta, tau)?;
    let n = h.n();
    let samples = (2.0 * (4.0 * n as f64).ln() / sep.alpha()).ceil() as usize;
    let required = required_parts(k, eps);
    let cap = T::of(1.0 + eps / 4.0);
    let quarter = T::of(0.25);

    let mut best_count = 0;
    for round in 0..MULTIWAY_ROUNDS {
        let base = (round as u64) << 32;
        let sets: Vec<Vec<usize>> = (0..samples)
            .into_par_iter()
            .map(|l| sep.sample(emb.units(), &mut stream_rng(seed, "multiway", base | l as u64)))
            .collect();

        let mut claimed = vec![false; n];
        let mut disjoint: Vec<(Vec<usize>, T)> = Vec::new();
        for s in sets {
            if s.is_empty() || mu_measure(&emb, &s) > cap {
                continue;
            }
            let fresh: Vec<usize> = s.into_iter().filter(|&v| !claimed[v]).collect();
            if fresh.is_empty() {
                continue;
            }
            for &v in &fresh {
                claimed[v] = true;
            }
            let mu = mu_measure(&emb, &fresh);
            disjoint.push((fresh, mu));
        }

        disjoint.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite measure"));
        let mut merged: Vec<(Vec<usize>, T)> = Vec::new();
        let mut bin: (Vec<usize>, T) = (Vec::new(), T::zero());
        for (s, mu) in disjoint {
            if mu >= quarter {
                merged.push((s, mu));
                continue;
            }
            bin.0.extend(s);
            bin.1 += mu;
            if bin.1 >= quarter {
                merged.push(std::mem::take(&mut bin));
            }
        }

        let mut parts: Vec<(CutResult<T>, T)> = Vec::new();
        for (mut s, mu) in merged {
            s.sort_unstable();
            parts.push((threshold_by_norm(&emb, h, &s)?, mu));
        }
        best_count = best_count.max(parts.len());
        if parts.len() >= required && !parts.is_empty() {
            parts.sort_by(|a, b| a.0.expansion.partial_cmp(&b.0.expansion).expect("finite expansion"));
            let (parts, merged_measures) = parts.into_iter().unzip();
            return Ok(MultiwayResult {
                parts,
                merged_measures,
                required,
                samples,
                rounds: round + 1,
                alpha: sep.alpha(),
                beta,
                tau,
            });
        }
    }
    Err(Error::StochasticFailure {
        rounds: MULTIWAY_ROUNDS,
        msg: format!("at most {best_count} sets formed, {required} required"),
    })
}
