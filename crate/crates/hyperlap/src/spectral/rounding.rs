use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::sdp::{solve_sdp, GramSolution, SdpConfig};
use super::{orthonormalize_against, Method, MinimizerSet};
use crate::error::{Error, Result};
use crate::hypergraph::cut::discrepancy_weighted;
use crate::hypergraph::{Hypergraph, SpaceVector};
use crate::scalar::{wdot, Scalar};

/// ⌈24·ln 20⌉: enough trials for a 1/24-probability event to occur with probability ≥ 95%.
pub const ROUNDING_TRIALS: usize = 72;

/// Gaussian projection f(v) = ⟨g_v, z⟩, best of `trials` by discrepancy ratio. Trial `i` draws
/// from stream `seed + i`; ties go to the lowest trial.
pub fn gaussian_round<T: Scalar>(
    h: &Hypergraph<T>,
    sol: &GramSolution<T>,
    prior: &MinimizerSet<T>,
    trials: usize,
    seed: u64,
) -> Result<SpaceVector<T>> {
    if trials == 0 {
        return Err(Error::domain("at least one rounding trial is needed"));
    }
    let dim = sol.vectors.first().map_or(0, Vec::len);
    let project = |s: u64| -> Option<(T, Vec<T>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let z: Vec<T> = (0..dim).map(|_| T::of(StandardNormal.sample(&mut rng))).collect();
        let f: Vec<T> = sol.vectors.iter().map(|g| g.iter().zip(&z).map(|(&a, &b)| a * b).sum()).collect();
        discrepancy_weighted(h, &f).ok().map(|d| (d, f))
    };
    for attempt in 0..2u64 {
        let base = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let best = (0..trials)
            .into_par_iter()
            .filter_map(|i| project(base.wrapping_add(i as u64)).map(|r| (i, r)))
            .reduce_with(|a, b| if b.1 .0 < a.1 .0 || (b.1 .0 == a.1 .0 && b.0 < a.0) { b } else { a });
        if let Some((_, (_, f))) = best {
            let w = h.weights();
            let nf = wdot(w, &f, &f).sqrt();
            for p in &prior.vectors {
                let drift = wdot(w, &f, p).abs() / nf;
                if drift > T::tol(1e-8) {
                    log::warn!("rounded vector drifts from the prior by {drift}");
                }
            }
            return Ok(SpaceVector::weighted(f));
        }
    }
    Err(Error::StochasticFailure { rounds: 2 * trials, msg: "every Gaussian projection vanished".into() })
}

/// f₁ = 1/‖1‖_w, then for i = 2..k an SDP solve against f₁..f_{i−1}, Gaussian rounding and a
/// defensive re-orthonormalization.
pub fn approx_procedural_minimizers<T: Scalar>(
    h: &Hypergraph<T>,
    k: usize,
    cfg: &SdpConfig,
    trials: usize,
    seed: u64,
) -> Result<MinimizerSet<T>> {
    if k == 0 || k >= h.n().max(2) {
        return Err(Error::domain(format!("k = {k} must satisfy 1 ≤ k < n = {}", h.n())));
    }
    let mut set = MinimizerSet::constant(h, Method::Sdp);
    set.seed = Some(seed);
    for i in 2..=k {
        let stream = seed ^ ((i as u64) << 40);
        let sol = solve_sdp(h, &set, cfg, stream)?;
        let f = gaussian_round(h, &sol, &set, trials, stream ^ (1 << 63))?;
        let w = h.weights();
        let raw = f.into_values();
        let g = orthonormalize_against(w, &set.vectors, &raw)
            .ok_or_else(|| Error::StochasticFailure { rounds: trials, msg: "rounded vector lies in the prior span".into() })?;
        let nraw = wdot(w, &raw, &raw).sqrt();
        let drift = raw.iter().zip(&g).map(|(&a, &b)| (a / nraw - b).abs()).fold(T::zero(), T::max);
        if drift > T::tol(1e-6) {
            log::warn!("re-orthonormalization moved f_{i} by {drift}");
        }
        set.residuals.push(sol.max_residual());
        set.push(h, g)?;
    }
    Ok(set)
}
