use crate::error::{Error, Result};
use crate::hypergraph::cut::threshold_sweep;
use crate::hypergraph::{CutResult, Hypergraph};
use crate::scalar::{dot, Scalar};
use crate::spectral::MinimizerSet;

/// Vertex i ↦ u_i = (f_1(i), …, f_k(i)) for orthonormal f_1..f_k in weighted space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEmbedding<T> {
    vectors: Vec<Vec<T>>,
    unit: Vec<Vec<T>>,
    norms_sq: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> SpectralEmbedding<T> {
    /// Builds the embedding from a non-empty orthonormal minimizer set. Vertices with u_i = 0 get
    /// the first basis vector as their direction.
    pub fn new(h: &Hypergraph<T>, set: &MinimizerSet<T>) -> Result<Self> {
        let k = set.len();
        if k == 0 {
            return Err(Error::domain("spectral embedding needs at least one vector"));
        }
        if set.vectors.iter().any(|f| f.len() != h.n()) {
            return Err(Error::domain("minimizer has the wrong length"));
        }
        let err = set.orthonormality_error(h.weights());
        if err > T::tol(1e-6) {
            return Err(Error::domain(format!("minimizer set is not orthonormal (error {err})")));
        }
        let vectors: Vec<Vec<T>> = (0..h.n()).map(|i| set.vectors.iter().map(|f| f[i]).collect()).collect();
        let norms_sq: Vec<T> = vectors.iter().map(|u| dot(u, u)).collect();
        let unit = vectors
            .iter()
            .zip(&norms_sq)
            .map(|(u, &n2)| {
                if n2 > T::zero() {
                    let n = n2.sqrt();
                    u.iter().map(|&x| x / n).collect()
                } else {
                    let mut e = vec![T::zero(); k];
                    e[0] = T::one();
                    e
                }
            })
            .collect();
        Ok(Self { vectors, unit, norms_sq, weights: h.weights().to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// u_i.
    pub fn vector(&self, i: usize) -> &[T] {
        &self.vectors[i]
    }

    /// ũ_i = u_i/‖u_i‖.
    pub fn unit(&self, i: usize) -> &[T] {
        &self.unit[i]
    }

    pub fn units(&self) -> &[Vec<T>] {
        &self.unit
    }

    /// ‖u_i‖².
    pub fn norm_sq(&self, i: usize) -> T {
        self.norms_sq[i]
    }

    pub fn norms_sq(&self) -> &[T] {
        &self.norms_sq
    }

    /// Σ_e w_e max‖u_i − u_j‖² / Σ_i w_i‖u_i‖².
    pub fn discrepancy(&self, h: &Hypergraph<T>) -> T {
        let num: T = h.edges().iter().map(|e| e.weight() * self.edge_spread_sq(e.vertices())).sum();
        num / mu_measure(self, &(0..self.n()).collect::<Vec<_>>())
    }

    /// max_{i,j∈e} ‖u_i − u_j‖².
    pub fn edge_spread_sq(&self, vertices: &[usize]) -> T {
        let mut best = T::zero();
        for (a, &i) in vertices.iter().enumerate() {
            for &j in &vertices[a + 1..] {
                let d: T = self.vectors[i].iter().zip(&self.vectors[j]).map(|(&x, &y)| (x - y) * (x - y)).sum();
                best = best.max(d);
            }
        }
        best
    }
}

/// μ(S) = Σ_{i∈S} w_i‖u_i‖².
pub fn mu_measure<T: Scalar>(emb: &SpectralEmbedding<T>, set: &[usize]) -> T {
    set.iter().map(|&i| emb.weights[i] * emb.norms_sq[i]).sum()
}

/// ν(S) = Σ_{e⊆S} w_e max_{i,j∈e}(‖u_i‖² − ‖u_j‖²) + Σ_{e∈∂S} w_e max_{i∈S∩e}‖u_i‖².
pub fn nu_measure<T: Scalar>(emb: &SpectralEmbedding<T>, h: &Hypergraph<T>, set: &[usize]) -> Result<T> {
    let mask = membership(h.n(), set)?;
    let mut total = T::zero();
    for e in h.edges() {
        let inside: Vec<usize> = e.vertices().iter().copied().filter(|&v| mask[v]).collect();
        if inside.is_empty() {
            continue;
        }
        let top = inside.iter().map(|&v| emb.norms_sq[v]).fold(T::zero(), T::max);
        if inside.len() == e.len() {
            let low = inside.iter().map(|&v| emb.norms_sq[v]).fold(T::infinity(), T::min);
            total += e.weight() * (top - low);
        } else {
            total += e.weight() * top;
        }
    }
    Ok(total)
}

/// Best level set S_r = {i ∈ S : ‖u_i‖² ≥ r} over r > 0.
pub fn threshold_by_norm<T: Scalar>(emb: &SpectralEmbedding<T>, h: &Hypergraph<T>, set: &[usize]) -> Result<CutResult<T>> {
    let mask = membership(h.n(), set)?;
    let g: Vec<T> = (0..h.n()).map(|i| if mask[i] { emb.norms_sq[i] } else { T::zero() }).collect();
    threshold_sweep(h, &g)
}

fn membership(n: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::domain(format!("vertex {v} out of range")));
        }
        mask[v] = true;
    }
    Ok(mask)
}
