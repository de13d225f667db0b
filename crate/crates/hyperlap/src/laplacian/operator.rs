use super::rate::{rate_weighted, RateConfig};
use crate::error::{Error, Result};
use crate::hypergraph::cut::{check_len, discrepancy_numerator};
use crate::hypergraph::{Hypergraph, Space, SpaceVector};
use crate::scalar::{wdot, Scalar};

/// Applies the Laplacian in the vector's own space: L_w f = −r, 𝔏φ = −Wr, L x = −W^{1/2} r.
pub fn apply_laplacian<T: Scalar>(h: &Hypergraph<T>, v: &SpaceVector<T>) -> Result<SpaceVector<T>> {
    check_len(h, v.len())?;
    if !v.is_finite() {
        return Err(Error::domain("Laplacian of a non-finite vector"));
    }
    let w = h.weights();
    let r = rate_weighted(h, &v.weighted_values(w), RateConfig::default()).rate;
    let neg = SpaceVector::weighted(r.into_iter().map(|x| -x).collect());
    Ok(neg.to_space(v.space(), w))
}

/// Rayleigh quotient ⟨f, L_w f⟩_w / ⟨f, f⟩_w, computed from the rate vector.
pub fn rayleigh_quotient<T: Scalar>(h: &Hypergraph<T>, v: &SpaceVector<T>) -> Result<T> {
    check_len(h, v.len())?;
    let w = h.weights();
    let f = v.weighted_values(w);
    let den = wdot(w, &f, &f);
    if den <= T::zero() {
        return Err(Error::domain("Rayleigh quotient of the zero vector"));
    }
    let r = rate_weighted(h, &f, RateConfig::default()).rate;
    Ok(-wdot(w, &f, &r) / den)
}

/// L̄_w f for the variant that spreads every edge's weight evenly over S_e × I_e.
/// This is not the diffusion operator; it exists to exhibit why the even split fails.
pub fn even_split_laplacian<T: Scalar>(h: &Hypergraph<T>, f: &SpaceVector<T>) -> Result<SpaceVector<T>> {
    check_len(h, f.len())?;
    let w = h.weights();
    let f = f.weighted_values(w);
    let tol = T::tol(RateConfig::default().tie) * (T::one() + f.iter().fold(T::zero(), |m, x| m.max(x.abs())));
    let mut out = vec![T::zero(); h.n()];
    for e in h.edges() {
        let vs = e.vertices();
        let lo = vs.iter().map(|&v| f[v]).fold(T::infinity(), T::min);
        let hi = vs.iter().map(|&v| f[v]).fold(T::neg_infinity(), T::max);
        if hi - lo <= tol {
            continue;
        }
        let bottom: Vec<usize> = vs.iter().copied().filter(|&v| f[v] - lo <= tol).collect();
        let top: Vec<usize> = vs.iter().copied().filter(|&v| hi - f[v] <= tol).collect();
        let a = e.weight() / T::of_usize(bottom.len() * top.len());
        for &u in &top {
            for &v in &bottom {
                let d = a * (f[u] - f[v]);
                out[u] += d;
                out[v] -= d;
            }
        }
    }
    let values = out.iter().zip(w).map(|(&x, &wu)| x / wu).collect();
    Ok(SpaceVector::weighted(values))
}

/// Π x: the component of a vector orthogonal to x₁ = W^{1/2}1, returned in normalized space.
pub fn transient_component<T: Scalar>(h: &Hypergraph<T>, v: &SpaceVector<T>) -> SpaceVector<T> {
    let w = h.weights();
    let f = v.weighted_values(w);
    let mean = wdot(w, &f, &vec![T::one(); f.len()]) / h.total_weight();
    SpaceVector::weighted(f.iter().map(|&x| x - mean).collect()).to_space(Space::Normalized, w)
}

/// D_w of the transient part of weighted coordinates `f`, 0 when that part vanishes.
pub(crate) fn transient_rayleigh<T: Scalar>(h: &Hypergraph<T>, f: &[T]) -> T {
    let w = h.weights();
    let mean = f.iter().zip(w).map(|(&x, &wu)| x * wu).sum::<T>() / h.total_weight();
    let g: Vec<T> = f.iter().map(|&x| x - mean).collect();
    let den = wdot(w, &g, &g);
    if den <= T::zero() {
        T::zero()
    } else {
        discrepancy_numerator(h, &g) / den
    }
}
