use serde::{Deserialize, Serialize};

use super::{Hypergraph, SpaceVector};
use crate::error::{Error, Result};
use crate::scalar::{wdot, Scalar};

/// A vertex subset together with its expansion data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult<T> {
    pub subset: Vec<usize>,
    pub expansion: T,
    pub cut_weight: T,
    pub subset_weight: T,
}

impl<T: Scalar> CutResult<T> {
    pub(crate) fn from_mask(h: &Hypergraph<T>, mask: &[bool]) -> Self {
        let subset: Vec<usize> = (0..h.n()).filter(|&v| mask[v]).collect();
        let cut_weight = cut_weight(h, mask);
        let subset_weight = h.weight_of(&subset);
        Self { subset, expansion: cut_weight / subset_weight, cut_weight, subset_weight }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.subset.binary_search(&v).is_ok()
    }
}

/// w(∂S) for the set marked in `mask`.
pub(crate) fn cut_weight<T: Scalar>(h: &Hypergraph<T>, mask: &[bool]) -> T {
    h.edges()
        .iter()
        .filter(|e| {
            let inside = e.vertices().iter().filter(|&&v| mask[v]).count();
            inside > 0 && inside < e.len()
        })
        .map(|e| e.weight())
        .fold(T::zero(), |a, b| a + b)
}

/// (min, max) of `f` over an edge.
pub(crate) fn edge_range<T: Scalar>(f: &[T], vertices: &[usize]) -> (T, T) {
    vertices.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(f[v]), hi.max(f[v])))
}

/// Σ_e w_e max_{u,v∈e} (f_u − f_v)².
pub(crate) fn discrepancy_numerator<T: Scalar>(h: &Hypergraph<T>, f: &[T]) -> T {
    h.edges()
        .iter()
        .map(|e| {
            let (lo, hi) = edge_range(f, e.vertices());
            e.weight() * (hi - lo) * (hi - lo)
        })
        .sum()
}

/// D_w(f) for weighted-space coordinates.
pub(crate) fn discrepancy_weighted<T: Scalar>(h: &Hypergraph<T>, f: &[T]) -> Result<T> {
    let den = wdot(h.weights(), f, f);
    if den <= T::zero() {
        return Err(Error::domain("discrepancy ratio of the zero vector"));
    }
    Ok(discrepancy_numerator(h, f) / den)
}

/// Discrepancy ratio D_w of the weighted image of `v`.
pub fn discrepancy_ratio<T: Scalar>(h: &Hypergraph<T>, v: &SpaceVector<T>) -> Result<T> {
    check_len(h, v.len())?;
    discrepancy_weighted(h, &v.weighted_values(h.weights()))
}

pub(crate) fn check_len<T: Scalar>(h: &Hypergraph<T>, len: usize) -> Result<()> {
    if len != h.n() {
        return Err(Error::domain(format!("vector of length {len} on a hypergraph with {} vertices", h.n())));
    }
    Ok(())
}

pub(crate) fn subset_mask<T: Scalar>(h: &Hypergraph<T>, set: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; h.n()];
    for &v in set {
        if v >= h.n() {
            return Err(Error::domain(format!("vertex {v} out of range")));
        }
        mask[v] = true;
    }
    let size = mask.iter().filter(|&&b| b).count();
    if size == 0 || size == h.n() {
        return Err(Error::domain("subset must be non-empty and proper"));
    }
    Ok(mask)
}

/// Expansion φ(S) = w(∂S)/w(S) of a non-empty proper subset.
pub fn expansion<T: Scalar>(h: &Hypergraph<T>, set: &[usize]) -> Result<CutResult<T>> {
    let mask = subset_mask(h, set)?;
    Ok(CutResult::from_mask(h, &mask))
}

const BRUTE_FORCE_MAX_N: usize = 20;

/// Exact φ_H = min over proper S of max{φ(S), φ(V∖S)} by enumeration.
/// The returned set is the lighter side of an optimal cut.
pub fn hypergraph_expansion_bruteforce<T: Scalar>(h: &Hypergraph<T>) -> Result<(T, Vec<usize>)> {
    let n = h.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity { what: "vertex count", got: n, max: BRUTE_FORCE_MAX_N });
    }
    if n < 2 {
        return Err(Error::domain("expansion needs at least two vertices"));
    }
    let edge_masks: Vec<(u32, T)> = h
        .edges()
        .iter()
        .map(|e| (e.vertices().iter().fold(0u32, |m, &v| m | 1 << v), e.weight()))
        .collect();
    let total = h.total_weight();
    let full = (1u32 << n) - 1;
    let mut best: Option<(T, u32)> = None;
    // S never contains vertex n-1, so each unordered cut {S, V∖S} is visited once
    for s in 1..(1u32 << (n - 1)) {
        let ws: T = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| h.vertex_weight(v)).sum();
        let cut: T = edge_masks
            .iter()
            .filter(|&&(em, _)| em & s != 0 && em & !s & full != 0)
            .map(|&(_, w)| w)
            .fold(T::zero(), |a, b| a + b);
        let value = cut / ws.min(total - ws);
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, s));
        }
    }
    let (value, s) = best.expect("n >= 2");
    let inside: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
    let ws = h.weight_of(&inside);
    let side = if ws + ws <= total { inside } else { (0..n).filter(|&v| s >> v & 1 == 0).collect() };
    Ok((value, side))
}

/// How `sweep_cut` interprets its input vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// `f ≥ 0`: scan level sets {f ≥ r} inside the support.
    NonNegative,
    /// `f ⊥_w 1`: shift to the weighted median, split into positive and negative parts, keep the
    /// part with the smaller discrepancy ratio and scan its square.
    Balanced,
}

/// Threshold rounding of a vector into a cut.
pub fn sweep_cut<T: Scalar>(h: &Hypergraph<T>, v: &SpaceVector<T>, mode: SweepMode) -> Result<CutResult<T>> {
    check_len(h, v.len())?;
    let f = v.weighted_values(h.weights());
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("sweep of a non-finite vector"));
    }
    if f.iter().all(|x| x.is_zero()) {
        return Err(Error::domain("sweep of the zero vector"));
    }
    match mode {
        SweepMode::NonNegative => {
            if f.iter().any(|&x| x < T::zero()) {
                return Err(Error::domain("non-negative sweep of a vector with negative entries"));
            }
            threshold_sweep(h, &f)
        }
        SweepMode::Balanced => {
            check_orthogonal_to_one(h.weights(), &f)?;
            let (plus, minus) = balanced_parts(h.weights(), &f);
            let d_plus = discrepancy_weighted(h, &plus).ok();
            let d_minus = discrepancy_weighted(h, &minus).ok();
            let part = match (d_plus, d_minus) {
                (Some(a), Some(b)) if b < a => minus,
                (None, Some(_)) => minus,
                _ => plus,
            };
            let squared: Vec<T> = part.iter().map(|&x| x * x).collect();
            threshold_sweep(h, &squared)
        }
    }
}

pub(crate) fn check_orthogonal_to_one<T: Scalar>(w: &[T], f: &[T]) -> Result<()> {
    let along: T = w.iter().zip(f).map(|(&wu, &x)| wu * x).sum();
    let total: T = w.iter().copied().sum();
    let fnorm = wdot(w, f, f).sqrt();
    if along.abs() > T::tol(1e-9) * fnorm * total.sqrt() {
        return Err(Error::domain(format!("vector is not orthogonal to 1 (⟨f,1⟩_w = {along})")));
    }
    Ok(())
}

/// The weighted-median coordinate c: f(v_i) for the smallest sorted index i whose cumulative
/// weight reaches w(V)/2.
pub(crate) fn median_shift<T: Scalar>(w: &[T], f: &[T]) -> T {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[a].partial_cmp(&f[b]).expect("finite").then(a.cmp(&b)));
    let half = w.iter().copied().sum::<T>() / T::of(2.0);
    let mut acc = T::zero();
    for &v in &order {
        acc += w[v];
        if acc >= half {
            return f[v];
        }
    }
    f[*order.last().expect("non-empty")]
}

/// Positive and negative parts (both non-negative) of f − c·1 with c the weighted median.
/// Each part is supported on at most half of the total weight.
pub(crate) fn balanced_parts<T: Scalar>(w: &[T], f: &[T]) -> (Vec<T>, Vec<T>) {
    let c = median_shift(w, f);
    let plus = f.iter().map(|&x| (x - c).max(T::zero())).collect();
    let minus = f.iter().map(|&x| (c - x).max(T::zero())).collect();
    (plus, minus)
}

/// Best level set {f ≥ r} over the distinct positive values r of a non-negative vector.
pub(crate) fn threshold_sweep<T: Scalar>(h: &Hypergraph<T>, f: &[T]) -> Result<CutResult<T>> {
    let mut order: Vec<usize> = (0..h.n()).filter(|&v| f[v] > T::zero()).collect();
    if order.is_empty() {
        return Err(Error::domain("sweep of a vector with empty support"));
    }
    order.sort_by(|&a, &b| f[b].partial_cmp(&f[a]).expect("finite").then(a.cmp(&b)));
    let mut inside = vec![0usize; h.m()];
    let mut cut = T::zero();
    let mut weight = T::zero();
    let mut best: Option<(T, usize)> = None;
    let mut i = 0;
    while i < order.len() {
        let level = f[order[i]];
        while i < order.len() && f[order[i]] == level {
            let v = order[i];
            weight += h.vertex_weight(v);
            for &e in h.incident(v) {
                inside[e] += 1;
                let size = h.edge(e).len();
                if size > 1 && inside[e] == 1 {
                    cut += h.edge(e).weight();
                }
                if size > 1 && inside[e] == size {
                    cut -= h.edge(e).weight();
                }
            }
            i += 1;
        }
        let value = cut.max(T::zero()) / weight;
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, i));
        }
    }
    let (_, len) = best.expect("non-empty support");
    let mut mask = vec![false; h.n()];
    for &v in &order[..len] {
        mask[v] = true;
    }
    Ok(CutResult::from_mask(h, &mask))
}
