#![allow(dead_code)]

use hyperlap::Hypergraph64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random hypergraph on `n` vertices with `m` edges of sizes in 1..=rmax (mostly ≥ 2) and
/// weights in [0.5, 2]. Uncovered vertices get an extra pair edge.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, m: usize, rmax: usize) -> Hypergraph64 {
    let mut edges: Vec<(Vec<usize>, f64)> = Vec::new();
    for _ in 0..m {
        let hi = rmax.min(n).max(1);
        let k = if hi >= 2 && rng.random_bool(0.9) { rng.random_range(2..=hi) } else { 1 };
        edges.push((sample(rng, n, k).into_vec(), rng.random_range(0.5..2.0)));
    }
    let mut covered = vec![false; n];
    for (e, _) in &edges {
        for &v in e {
            covered[v] = true;
        }
    }
    for v in 0..n {
        if !covered[v] {
            let u = if n > 1 { (v + 1 + rng.random_range(0..n - 1)) % n } else { v };
            edges.push((vec![v, u], rng.random_range(0.5..2.0)));
        }
    }
    Hypergraph64::new(n, edges).unwrap()
}

/// Random connected hypergraph: a random spanning chain of pairs plus `extra` random edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: usize, rmax: usize) -> Hypergraph64 {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<(Vec<usize>, f64)> =
        order.windows(2).map(|p| (vec![p[0], p[1]], rng.random_range(0.5..2.0))).collect();
    for _ in 0..extra {
        let k = rng.random_range(2..=rmax.min(n).max(2));
        edges.push((sample(rng, n, k).into_vec(), rng.random_range(0.5..2.0)));
    }
    Hypergraph64::new(n, edges).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Weighted projection of `f` orthogonal to the constant vector.
pub fn center(w: &[f64], f: &[f64]) -> Vec<f64> {
    let mean = f.iter().zip(w).map(|(x, y)| x * y).sum::<f64>() / w.iter().sum::<f64>();
    f.iter().map(|x| x - mean).collect()
}

pub fn wdot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum()
}

/// Independent evaluation of Σ_e w_e max_{u,v∈e} (f_u − f_v)² by explicit pair enumeration.
pub fn pairwise_numerator(h: &Hypergraph64, f: &[f64]) -> f64 {
    h.edges()
        .iter()
        .map(|e| {
            let vs = e.vertices();
            let mut best = 0.0f64;
            for &u in vs {
                for &v in vs {
                    best = best.max((f[u] - f[v]).powi(2));
                }
            }
            e.weight() * best
        })
        .sum()
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{what}: {a} vs {b}");
}
