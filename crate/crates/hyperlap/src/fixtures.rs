//! Small hypergraphs with known closed-form spectra.

use crate::hypergraph::Hypergraph;
use crate::scalar::Scalar;

fn labelled<T: Scalar>(n: usize, edges: &[(&[usize], f64)]) -> Hypergraph<T> {
    let labels = (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
    Hypergraph::new(n, edges.iter().map(|&(e, w)| (e, T::of(w))))
        .and_then(|h| h.with_labels(labels))
        .expect("fixture is valid")
}

/// Edges {a,b} and {b,c,d} with unit weights; vertex weights (1,2,1,1).
pub fn two_edge_path<T: Scalar>() -> Hypergraph<T> {
    labelled(4, &[(&[0, 1], 1.0), (&[1, 2, 3], 1.0)])
}

/// Nested unit edges {a}, {a,b}, {a,b,c}, {a,b,c,d}, {a,b,c,d,e}; vertex weights (5,4,3,2,1).
/// Its second discrepancy minimizer is not unique.
pub fn nested_chain<T: Scalar>() -> Hypergraph<T> {
    labelled(5, &[(&[0], 1.0), (&[0, 1], 1.0), (&[0, 1, 2], 1.0), (&[0, 1, 2, 3], 1.0), (&[0, 1, 2, 3, 4], 1.0)])
}

/// e1={a,b}, e2={b,d}, e3={c,d} (weight 2), e4={a}, e5={a,b,c}; every vertex has weight 3.
/// `heavy_edge_weight` overrides the weight of e3.
pub fn four_vertex_mixed<T: Scalar>(heavy_edge_weight: f64) -> Hypergraph<T> {
    labelled(
        4,
        &[(&[0, 1], 1.0), (&[1, 3], 1.0), (&[2, 3], heavy_edge_weight), (&[0], 1.0), (&[0, 1, 2], 1.0)],
    )
}

/// `k` disjoint cliques on `size` vertices each, every pair joined by a unit edge; clique `c`
/// holds vertices c·size .. (c+1)·size.
pub fn disjoint_cliques<T: Scalar>(k: usize, size: usize) -> Hypergraph<T> {
    let mut edges = Vec::new();
    for c in 0..k {
        for a in c * size..(c + 1) * size {
            for b in a + 1..(c + 1) * size {
                edges.push((vec![a, b], T::one()));
            }
        }
    }
    Hypergraph::new(k * size, edges).expect("fixture is valid")
}
