use serde::Serialize;

use super::rate::{rate_weighted, RateConfig};
use crate::error::{Error, Result};
use crate::hypergraph::cut::check_len;
use crate::hypergraph::{Hypergraph, Space, SpaceVector};
use crate::scalar::Scalar;

/// One application of M = I − 𝔏/2 to a measure.
pub fn discretized_step<T: Scalar>(h: &Hypergraph<T>, phi: &SpaceVector<T>) -> Result<SpaceVector<T>> {
    check_len(h, phi.len())?;
    let w = h.weights();
    let measure = phi.to_space(Space::Measure, w).into_values();
    let f: Vec<T> = measure.iter().zip(w).map(|(&p, &wu)| p / wu).collect();
    let rho = rate_weighted(h, &f, RateConfig::default()).measure_rate;
    let half = T::of(0.5);
    let out = measure.iter().zip(&rho).map(|(&p, &r)| p + half * r).collect();
    Ok(SpaceVector::measure(out))
}

/// Hop diameter against the spectral bound 2·ln N_w / ln(1/(1 − γ₂/2)), N_w = max_u w(V)/w_u.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiameterReport {
    pub bound: f64,
    pub actual: usize,
    /// Every path length l > bound is achievable, so the diameter is at most ⌊bound⌋ + 1.
    pub holds: bool,
}

pub fn diameter_check<T: Scalar>(h: &Hypergraph<T>, gamma2: T) -> Result<DiameterReport> {
    if !(gamma2 > T::zero()) {
        return Err(Error::domain("spectral gap must be positive"));
    }
    let actual = h.hop_diameter()?;
    let nw = (h.total_weight() / h.min_vertex_weight()).f64();
    let contraction = 1.0 - gamma2.f64() / 2.0;
    let bound = if contraction <= 0.0 { 0.0 } else { 2.0 * nw.ln() / (1.0 / contraction).ln() };
    Ok(DiameterReport { bound, actual, holds: actual as f64 <= bound.floor() + 1.0 })
}
