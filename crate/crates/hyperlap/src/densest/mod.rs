//! Maximal densest subsets via parametric minimum cut.
//!
//! An instance has ground elements `0..k` with positive weights, an "in" family `I` and an "out"
//! family `S` of valued subsets. For `X` non-empty,
//! `δ(X) = (c(I_X) − c(S_X)) / w(X)` where `I_X` holds the in-edges contained in `X` and `S_X`
//! the out-edges meeting `X`.

mod flow;

pub use flow::{FlowNetwork, MaxFlow};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct DensestEdge<T> {
    /// Sorted element indices.
    pub vertices: Vec<usize>,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensestInstance<T> {
    weights: Vec<T>,
    in_edges: Vec<DensestEdge<T>>,
    out_edges: Vec<DensestEdge<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensestSolution<T> {
    /// The maximal densest subset, sorted.
    pub subset: Vec<usize>,
    /// δ(P), recomputed from the subset.
    pub density: T,
    /// Minimum cut value of the parametric network at λ = δ(P).
    pub certificate: T,
}

impl<T: Scalar> DensestInstance<T> {
    pub fn new(weights: Vec<T>, in_edges: Vec<(Vec<usize>, T)>, out_edges: Vec<(Vec<usize>, T)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("densest-subset instance with empty ground set"));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w.is_finite() && w > T::zero())) {
            return Err(Error::invalid(format!("element weight {w} must be positive")));
        }
        let k = weights.len();
        let check = |list: Vec<(Vec<usize>, T)>| -> Result<Vec<DensestEdge<T>>> {
            list.into_iter()
                .map(|(mut vertices, value)| {
                    vertices.sort_unstable();
                    vertices.dedup();
                    if vertices.is_empty() || vertices.iter().any(|&v| v >= k) {
                        return Err(Error::invalid("densest-subset edge empty or outside the ground set"));
                    }
                    if !(value.is_finite() && value > T::zero()) {
                        return Err(Error::invalid(format!("edge value {value} must be positive")));
                    }
                    Ok(DensestEdge { vertices, value })
                })
                .collect()
        };
        Ok(Self { weights, in_edges: check(in_edges)?, out_edges: check(out_edges)? })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn in_edges(&self) -> &[DensestEdge<T>] {
        &self.in_edges
    }

    pub fn out_edges(&self) -> &[DensestEdge<T>] {
        &self.out_edges
    }

    /// δ(X) for a membership mask, summed in edge order.
    pub fn density_of_mask(&self, mask: &[bool]) -> T {
        let weight: T = (0..self.len()).filter(|&v| mask[v]).map(|v| self.weights[v]).sum();
        let gain: T = self.in_edges.iter().filter(|e| e.vertices.iter().all(|&v| mask[v])).map(|e| e.value).sum();
        let loss: T = self.out_edges.iter().filter(|e| e.vertices.iter().any(|&v| mask[v])).map(|e| e.value).sum();
        (gain - loss) / weight
    }

    /// δ(X) for a list of elements.
    pub fn density(&self, set: &[usize]) -> T {
        self.density_of_mask(&self.mask(set))
    }

    fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        for &v in set {
            mask[v] = true;
        }
        mask
    }

    /// The instance left after removing `p` together with the in-edges inside `p` and the
    /// out-edges meeting `p`. Returns the new instance and the map from new to old indices.
    pub fn remove(&self, p: &[usize]) -> Option<(Self, Vec<usize>)> {
        let mask = self.mask(p);
        let keep: Vec<usize> = (0..self.len()).filter(|&v| !mask[v]).collect();
        if keep.is_empty() {
            return None;
        }
        let mut index = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let remap = |e: &DensestEdge<T>| DensestEdge {
            vertices: e.vertices.iter().filter(|&&v| !mask[v]).map(|&v| index[v]).collect(),
            value: e.value,
        };
        let in_edges = self.in_edges.iter().filter(|e| !e.vertices.iter().all(|&v| mask[v])).map(remap).collect();
        let out_edges = self.out_edges.iter().filter(|e| !e.vertices.iter().any(|&v| mask[v])).map(remap).collect();
        let weights = keep.iter().map(|&v| self.weights[v]).collect();
        Some((Self { weights, in_edges, out_edges }, keep))
    }

    fn scale(&self) -> T {
        let total: T = self.in_edges.iter().chain(&self.out_edges).map(|e| e.value).sum();
        let wmin = self.weights.iter().copied().fold(T::infinity(), T::min);
        (total / wmin).max(T::one())
    }

    /// Maximal maximizer of `c(I_X) − c(S_X) − λ·w(X)` and the minimum cut value.
    fn parametric_cut(&self, lambda: T) -> (Vec<bool>, T) {
        let k = self.len();
        let (s, t) = (0, 1);
        let vnode = |v: usize| 2 + v;
        let inode = |i: usize| 2 + k + i;
        let onode = |j: usize| 2 + k + self.in_edges.len() + j;
        let mut g = FlowNetwork::new(2 + k + self.in_edges.len() + self.out_edges.len());
        let finite: T = self.in_edges.iter().chain(&self.out_edges).map(|e| e.value).sum::<T>()
            + self.weights.iter().map(|&w| (lambda * w).abs()).sum::<T>();
        let inf = T::one() + finite;
        for (i, e) in self.in_edges.iter().enumerate() {
            g.add_edge(s, inode(i), e.value);
            for &v in &e.vertices {
                g.add_edge(inode(i), vnode(v), inf);
            }
        }
        for (j, e) in self.out_edges.iter().enumerate() {
            for &v in &e.vertices {
                g.add_edge(vnode(v), onode(j), inf);
            }
            g.add_edge(onode(j), t, e.value);
        }
        for (v, &w) in self.weights.iter().enumerate() {
            let c = lambda * w;
            if c >= T::zero() {
                g.add_edge(vnode(v), t, c);
            } else {
                g.add_edge(s, vnode(v), -c);
            }
        }
        let r = g.max_flow(s, t);
        ((0..k).map(|v| r.maximal_source_side[vnode(v)]).collect(), r.value)
    }
}

/// Finds the maximal densest subset by Newton (Dinkelbach) iteration on the parametric cut.
pub fn solve_densest<T: Scalar>(inst: &DensestInstance<T>) -> DensestSolution<T> {
    let k = inst.len();
    if k == 1 {
        return DensestSolution { subset: vec![0], density: inst.density_of_mask(&[true]), certificate: T::zero() };
    }
    let tol = T::tol(1e-12) * inst.scale();
    let mut best = vec![true; k];
    let mut lambda = inst.density_of_mask(&best);
    let mut certificate;
    for _ in 0..(4 * k + 64) {
        let (side, cut) = inst.parametric_cut(lambda);
        certificate = cut;
        if side.iter().any(|&b| b) {
            let d = inst.density_of_mask(&side);
            if d > lambda + tol {
                best = side;
                lambda = d;
                continue;
            }
            if d >= lambda - tol && side.iter().zip(&best).all(|(&s, &b)| s || !b) {
                best = side;
                lambda = d;
            }
        }
        let subset = (0..k).filter(|&v| best[v]).collect();
        return DensestSolution { subset, density: lambda, certificate };
    }
    unreachable!("density strictly increases over finitely many subsets")
}

const BRUTE_FORCE_MAX: usize = 16;

/// Maximum density and every subset (as a sorted list) attaining it within a relative tolerance.
pub fn densest_maximizers<T: Scalar>(inst: &DensestInstance<T>) -> Result<(T, Vec<Vec<usize>>)> {
    let k = inst.len();
    if k > BRUTE_FORCE_MAX {
        return Err(Error::Capacity { what: "ground set size", got: k, max: BRUTE_FORCE_MAX });
    }
    let densities: Vec<T> = (1u32..1 << k)
        .map(|m| inst.density_of_mask(&(0..k).map(|v| m >> v & 1 == 1).collect::<Vec<_>>()))
        .collect();
    let max = densities.iter().copied().fold(T::neg_infinity(), T::max);
    let tol = T::tol(1e-12) * inst.scale();
    let sets = densities
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= max - tol)
        .map(|(i, _)| (0..k).filter(|&v| (i as u32 + 1) >> v & 1 == 1).collect())
        .collect();
    Ok((max, sets))
}

/// Exhaustive densest subset: the union of all maximizers, which is itself a maximizer.
pub fn densest_bruteforce<T: Scalar>(inst: &DensestInstance<T>) -> Result<DensestSolution<T>> {
    let (max, sets) = densest_maximizers(inst)?;
    let mut mask = vec![false; inst.len()];
    for s in &sets {
        for &v in s {
            mask[v] = true;
        }
    }
    let density = inst.density_of_mask(&mask);
    assert!(
        density >= max - T::tol(1e-9) * inst.scale(),
        "union of maximizers has density {density} below the maximum {max}"
    );
    let subset = (0..inst.len()).filter(|&v| mask[v]).collect();
    Ok(DensestSolution { subset, density, certificate: T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element() {
        let inst = DensestInstance::new(vec![1.0], vec![(vec![0], 2.0)], vec![]).unwrap();
        let s = solve_densest(&inst);
        assert_eq!((s.subset, s.density), (vec![0], 2.0));
    }

    #[test]
    fn in_edge_beats_shared_out_edge() {
        let inst = DensestInstance::new(vec![1.0, 1.0], vec![(vec![0], 3.0)], vec![(vec![0, 1], 1.0)]).unwrap();
        let s = solve_densest(&inst);
        assert_eq!((s.subset.clone(), s.density), (vec![0], 2.0));
        assert_eq!(densest_bruteforce(&inst).unwrap().subset, s.subset);
    }

    #[test]
    fn avoids_penalised_element() {
        let inst = DensestInstance::new(vec![1.0, 1.0], vec![], vec![(vec![0], 1.0)]).unwrap();
        let s = solve_densest(&inst);
        assert_eq!((s.subset, s.density), (vec![1], 0.0));
    }

    #[test]
    fn negative_density_takes_everything_if_forced() {
        let inst = DensestInstance::new(vec![1.0f64, 2.0], vec![], vec![(vec![0], 1.0), (vec![1], 1.0)]).unwrap();
        let s = solve_densest(&inst);
        let b = densest_bruteforce(&inst).unwrap();
        assert_eq!(s.subset, b.subset);
        assert!((s.density - b.density).abs() < 1e-12);
    }

    #[test]
    fn removal_drops_consumed_edges() {
        let inst = DensestInstance::new(
            vec![1.0, 1.0, 1.0],
            vec![(vec![0, 1], 1.0), (vec![2], 1.0)],
            vec![(vec![1, 2], 1.0)],
        )
        .unwrap();
        let (rest, map) = inst.remove(&[2]).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert_eq!(rest.in_edges().len(), 1);
        assert!(rest.out_edges().is_empty());
        assert!(inst.remove(&[0, 1, 2]).is_none());
    }
}
