use super::Hypergraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A simple undirected graph with adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Rejects self-loops and out-of-range endpoints; repeated edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map_or(0, Vec::len);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }
}

/// One unit hyperedge {v} ∪ N(v) per vertex.
pub fn reduce_vertex_expansion<T: Scalar>(g: &SimpleGraph) -> Hypergraph<T> {
    let edges = (0..g.n()).map(|v| {
        let mut e = g.neighbors(v).to_vec();
        e.push(v);
        (e, T::one())
    });
    Hypergraph::new(g.n(), edges).expect("closed neighborhoods are non-empty")
}

/// φᵛ(S) = (|N_in(S)| + |N_out(S)|) / |S|.
pub fn vertex_expansion(g: &SimpleGraph, set: &[usize]) -> Result<f64> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::domain(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::domain("subset must be non-empty and proper"));
    }
    let boundary = (0..n)
        .filter(|&v| g.neighbors(v).iter().any(|&u| inside[u] != inside[v]))
        .count();
    Ok(boundary as f64 / size as f64)
}
