//! Weighted hypergraphs, vector spaces over their vertices, expansion and sweep cuts.

pub(crate) mod cut;
mod graph;
mod io;
mod space;

pub use cut::{
    discrepancy_ratio, expansion, hypergraph_expansion_bruteforce, sweep_cut, CutResult, SweepMode,
};
pub use graph::{reduce_vertex_expansion, vertex_expansion, SimpleGraph};
pub use io::{load_hypergraph, parse_hypergraph, write_hypergraph};
pub use space::{Space, SpaceVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperedge<T> {
    vertices: Vec<usize>,
    weight: T,
}

impl<T: Scalar> Hyperedge<T> {
    /// Sorted, duplicate-free vertex list.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// A hypergraph with positive edge weights; vertex weights are the sums of incident edge weights.
#[derive(Clone, Debug)]
pub struct Hypergraph<T> {
    n: usize,
    edges: Vec<Hyperedge<T>>,
    vertex_weight: Vec<T>,
    incidence: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> Hypergraph<T> {
    /// Builds a hypergraph on vertices `0..n`. Duplicate vertices inside an edge are collapsed.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, T)>,
        E: AsRef<[usize]>,
    {
        let mut list = Vec::new();
        let mut vertex_weight = vec![T::zero(); n];
        let mut incidence = vec![Vec::new(); n];
        for (idx, (verts, weight)) in edges.into_iter().enumerate() {
            let mut vertices = verts.as_ref().to_vec();
            vertices.sort_unstable();
            vertices.dedup();
            if vertices.is_empty() {
                return Err(Error::invalid(format!("edge {idx} is empty")));
            }
            if !(weight.is_finite() && weight > T::zero()) {
                return Err(Error::invalid(format!("edge {idx} has non-positive weight {weight}")));
            }
            if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!("edge {idx} names vertex {v} but n = {n}")));
            }
            for &v in &vertices {
                vertex_weight[v] += weight;
                incidence[v].push(idx);
            }
            list.push(Hyperedge { vertices, weight });
        }
        if let Some(v) = vertex_weight.iter().position(|&w| w <= T::zero()) {
            return Err(Error::invalid(format!("vertex {v} has zero weight (lies in no edge)")));
        }
        Ok(Self { n, edges: list, vertex_weight, incidence, labels: None })
    }

    /// Attaches vertex names.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!("{} labels for {} vertices", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Name of vertex `v`: its label if present, otherwise its index.
    pub fn label(&self, v: usize) -> String {
        self.labels.as_ref().map_or_else(|| v.to_string(), |l| l[v].clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge<T>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Hyperedge<T> {
        &self.edges[e]
    }

    pub fn weights(&self) -> &[T] {
        &self.vertex_weight
    }

    pub fn vertex_weight(&self, v: usize) -> T {
        self.vertex_weight[v]
    }

    /// Indices of the edges containing `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// w(V).
    pub fn total_weight(&self) -> T {
        self.vertex_weight.iter().copied().sum()
    }

    /// w(S) for a vertex list.
    pub fn weight_of(&self, set: &[usize]) -> T {
        set.iter().map(|&v| self.vertex_weight[v]).sum()
    }

    pub fn min_vertex_weight(&self) -> T {
        self.vertex_weight.iter().copied().fold(T::infinity(), T::min)
    }

    /// Smallest edge size.
    pub fn r_min(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).min().unwrap_or(0)
    }

    /// Largest edge size.
    pub fn r_max(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).max().unwrap_or(0)
    }

    /// Connected components as lists of vertices, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &e in &self.incidence[u] {
                    for &v in &self.edges[e].vertices {
                        if comp[v] == usize::MAX {
                            comp[v] = id;
                            members.push(v);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The same hypergraph with every weight converted to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Hypergraph<U> {
        Hypergraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Hyperedge { vertices: e.vertices.clone(), weight: U::of(e.weight.f64()) })
                .collect(),
            vertex_weight: self.vertex_weight.iter().map(|w| U::of(w.f64())).collect(),
            incidence: self.incidence.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Stationary measure φ* = (⟨1,φ⟩ / w(V))·W1 for total mass `mass`.
    pub fn stationary(&self, mass: T) -> Vec<T> {
        let scale = mass / self.total_weight();
        self.vertex_weight.iter().map(|&w| w * scale).collect()
    }

    /// Hop diameter: the largest over vertex pairs of the fewest edges in a connecting path.
    /// A vertex is at distance 1 from itself.
    pub fn hop_diameter(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::domain("hop diameter of a disconnected hypergraph"));
        }
        let mut diam = if self.n > 0 { 1 } else { 0 };
        for s in 0..self.n {
            let dist = self.hop_distances(s);
            for (v, &d) in dist.iter().enumerate() {
                if v != s {
                    diam = diam.max(d);
                }
            }
        }
        Ok(diam)
    }

    fn hop_distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        dist[s] = 0;
        let mut frontier = vec![s];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for &e in &self.incidence[u] {
                    if std::mem::replace(&mut edge_seen[e], true) {
                        continue;
                    }
                    for &v in &self.edges[e].vertices {
                        if dist[v] == usize::MAX {
                            dist[v] = d;
                            next.push(v);
                        }
                    }
                }
            }
            frontier = next;
        }
        dist
    }
}
