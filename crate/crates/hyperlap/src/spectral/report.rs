use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::MinimizerSet;
use crate::hypergraph::cut::discrepancy_weighted;
use crate::hypergraph::Hypergraph;
use crate::scalar::{wdot, Scalar};

/// Quantities around ξ_k ≤ γ_k ≤ ζ_k ≤ k·ξ_k for one orthogonal candidate set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimaximizerReport {
    pub k: usize,
    /// max_i D_w(f_i): an upper bound on ξ_k.
    pub xi_upper: f64,
    /// Largest D_w found on a sampled grid of the span. It never exceeds the span maximum, which
    /// in turn bounds ζ_k from above.
    pub span_max_sampled: f64,
    /// k·max_i D_w(f_i).
    pub k_xi_upper: f64,
    /// Exact γ_k when supplied.
    pub gamma: Option<f64>,
    /// span_max_sampled ≤ k·xi_upper, which orthogonality of the candidates guarantees.
    pub span_bound_holds: bool,
}

/// Evaluates the candidates and a grid of their span. `gamma` is the oracle value, if known.
pub fn minimaximizer_report<T: Scalar>(h: &Hypergraph<T>, candidates: &MinimizerSet<T>, gamma: Option<T>) -> MinimaximizerReport {
    let w = h.weights();
    let k = candidates.len();
    let unit: Vec<Vec<T>> = candidates
        .vectors
        .iter()
        .map(|f| {
            let nf = wdot(w, f, f).sqrt();
            f.iter().map(|&x| x / nf).collect()
        })
        .collect();
    let ratio = |f: &[T]| discrepancy_weighted(h, f).map(|d| d.f64()).unwrap_or(0.0);
    let xi_upper = unit.iter().map(|f| ratio(f)).fold(0.0, f64::max);
    let combine = |coef: &[f64]| -> Vec<T> {
        (0..h.n()).map(|v| unit.iter().zip(coef).map(|(f, &c)| f[v] * T::of(c)).sum()).collect()
    };
    let mut span_max = xi_upper;
    if k == 2 {
        let steps = 4000;
        for j in 0..steps {
            let theta = std::f64::consts::PI * j as f64 / steps as f64;
            span_max = span_max.max(ratio(&combine(&[theta.cos(), theta.sin()])));
        }
    } else if k > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..20_000 {
            let c: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            span_max = span_max.max(ratio(&combine(&c)));
        }
    }
    let k_xi_upper = k as f64 * xi_upper;
    MinimaximizerReport {
        k,
        xi_upper,
        span_max_sampled: span_max,
        k_xi_upper,
        gamma: gamma.map(|g| g.f64()),
        span_bound_holds: span_max <= k_xi_upper * (1.0 + 1e-9) + 1e-12,
    }
}
