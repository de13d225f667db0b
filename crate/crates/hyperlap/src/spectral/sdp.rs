//! SDP relaxation of the k-th procedural minimizer, solved in rank-n vector form:
//! minimize Σ_e w_e max_{u,v∈e} ‖g_u − g_v‖² subject to Σ_v w_v‖g_v‖² = 1 and
//! Σ_v w_v f_i(v) g_v = 0 for every prior f_i.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::MinimizerSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpConfig {
    /// Initial step length η₀ (steps are η₀/√t along the normalized subgradient).
    pub step: f64,
    pub iterations: usize,
    pub restarts: usize,
    /// Allowed constraint residual.
    pub feasibility: f64,
    /// Relative tie tolerance when picking attaining pairs.
    pub tie: f64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        Self { step: 0.1, iterations: 50_000, restarts: 5, feasibility: 1e-6, tie: 1e-9 }
    }
}

/// Vectors g_v (one row per vertex) with objective and constraint residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSolution<T> {
    pub vectors: Vec<Vec<T>>,
    pub objective: T,
    /// Σ_v w_v ‖g_v‖² − 1.
    pub residual_norm: T,
    /// ‖Σ_v w_v f_i(v) g_v‖ per prior vector.
    pub residual_orth: Vec<T>,
    /// Restart that produced the solution.
    pub restart: usize,
}

impl<T: Scalar> GramSolution<T> {
    /// Objective recomputed from the vectors.
    pub fn evaluate(h: &Hypergraph<T>, vectors: &[Vec<T>]) -> T {
        h.edges()
            .iter()
            .map(|e| {
                let vs = e.vertices();
                let mut best = T::zero();
                for (i, &u) in vs.iter().enumerate() {
                    for &v in &vs[i + 1..] {
                        best = best.max(sq_dist(&vectors[u], &vectors[v]));
                    }
                }
                e.weight() * best
            })
            .sum()
    }

    pub fn max_residual(&self) -> T {
        self.residual_orth.iter().copied().fold(self.residual_norm.abs(), T::max)
    }
}

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Projected subgradient descent with restarts. Restart `i` draws from stream `seed + i`.
pub fn solve_sdp<T: Scalar>(
    h: &Hypergraph<T>,
    prior: &MinimizerSet<T>,
    cfg: &SdpConfig,
    seed: u64,
) -> Result<GramSolution<T>> {
    let n = h.n();
    if prior.len() >= n {
        return Err(Error::domain("prior already spans the whole space"));
    }
    let h64: Hypergraph<f64> = h.cast();
    let w = h64.weights().to_vec();
    let sw: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    // prior in normalized coordinates x_i = W^{1/2} f_i, orthonormalized
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for f in &prior.vectors {
        let mut x: Vec<f64> = f.iter().zip(&sw).map(|(a, s)| a.f64() * s).collect();
        project_out(&basis, &mut x);
        let nx = norm(&x);
        if nx > 1e-12 {
            basis.push(x.iter().map(|a| a / nx).collect());
        }
    }
    let runs: Vec<(f64, Vec<Vec<f64>>, usize)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let (obj, hm) = descend(&h64, &sw, &basis, cfg, seed.wrapping_add(r as u64));
            (obj, hm, r)
        })
        .collect();
    let (_, hm, restart) = runs
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one restart");
    let vectors: Vec<Vec<f64>> = hm.iter().zip(&sw).map(|(row, s)| row.iter().map(|x| x / s).collect()).collect();
    let vectors_t: Vec<Vec<T>> = vectors.iter().map(|r| r.iter().map(|&x| T::of(x)).collect()).collect();
    let objective = GramSolution::evaluate(h, &vectors_t);
    let total: T = vectors_t.iter().zip(h.weights()).map(|(g, &wv)| wv * g.iter().map(|&x| x * x).sum::<T>()).sum();
    let residual_orth = prior
        .vectors
        .iter()
        .map(|f| {
            let dim = vectors_t.first().map_or(0, Vec::len);
            let mut acc = vec![T::zero(); dim];
            for ((g, &wv), &fv) in vectors_t.iter().zip(h.weights()).zip(f) {
                for (a, &x) in acc.iter_mut().zip(g) {
                    *a += wv * fv * x;
                }
            }
            acc.iter().map(|&x| x * x).sum::<T>().sqrt()
        })
        .collect();
    let sol = GramSolution { vectors: vectors_t, objective, residual_norm: total - T::one(), residual_orth, restart };
    let limit = T::tol(cfg.feasibility);
    if !(sol.max_residual() <= limit) || !objective.is_finite() {
        return Err(Error::Convergence {
            msg: format!("constraint residual above {limit} after {} iterations", cfg.iterations),
            residual: sol.max_residual().f64(),
        });
    }
    Ok(sol)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn project_out(basis: &[Vec<f64>], x: &mut [f64]) {
    for b in basis {
        let c: f64 = b.iter().zip(x.iter()).map(|(p, q)| p * q).sum();
        for (a, p) in x.iter_mut().zip(b) {
            *a -= c * p;
        }
    }
}

/// Projects every column of the n × n matrix `hm` (rows = vertices) off the prior basis and
/// rescales to unit Frobenius norm.
fn make_feasible(basis: &[Vec<f64>], hm: &mut [Vec<f64>]) -> bool {
    let n = hm.len();
    let dim = hm.first().map_or(0, Vec::len);
    for j in 0..dim {
        let mut col: Vec<f64> = (0..n).map(|v| hm[v][j]).collect();
        project_out(basis, &mut col);
        project_out(basis, &mut col);
        for v in 0..n {
            hm[v][j] = col[v];
        }
    }
    let total = hm.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>()).sum::<f64>().sqrt();
    if !(total > 0.0 && total.is_finite()) {
        return false;
    }
    for r in hm.iter_mut() {
        for x in r.iter_mut() {
            *x /= total;
        }
    }
    true
}

/// Objective and subgradient at normalized-coordinate vectors h_v = √w_v g_v.
fn objective_and_subgradient(h: &Hypergraph<f64>, sw: &[f64], hm: &[Vec<f64>], tie: f64, grad: &mut [Vec<f64>]) -> f64 {
    for r in grad.iter_mut() {
        r.iter_mut().for_each(|x| *x = 0.0);
    }
    let dim = hm.first().map_or(0, Vec::len);
    let g: Vec<Vec<f64>> = hm.iter().zip(sw).map(|(r, s)| r.iter().map(|x| x / s).collect()).collect();
    let mut obj = 0.0;
    let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
    for e in h.edges() {
        let vs = e.vertices();
        if vs.len() < 2 {
            continue;
        }
        pairs.clear();
        let mut best = 0.0f64;
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                let d = sq_dist(&g[u], &g[v]);
                best = best.max(d);
                pairs.push((u, v, d));
            }
        }
        obj += e.weight() * best;
        let attaining: Vec<&(usize, usize, f64)> = pairs.iter().filter(|p| p.2 >= best - tie * (1.0 + best)).collect();
        let share = 2.0 * e.weight() / attaining.len() as f64;
        for &&(u, v, _) in &attaining {
            for j in 0..dim {
                let d = g[u][j] - g[v][j];
                grad[u][j] += share * d / sw[u];
                grad[v][j] -= share * d / sw[v];
            }
        }
    }
    obj
}

fn descend(h: &Hypergraph<f64>, sw: &[f64], basis: &[Vec<f64>], cfg: &SdpConfig, seed: u64) -> (f64, Vec<Vec<f64>>) {
    let n = h.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hm: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
    if !make_feasible(basis, &mut hm) {
        return (f64::INFINITY, hm);
    }
    let mut grad = vec![vec![0.0; n]; n];
    let mut best = (f64::INFINITY, hm.clone());
    for t in 1..=cfg.iterations {
        let obj = objective_and_subgradient(h, sw, &hm, cfg.tie, &mut grad);
        if obj < best.0 {
            best = (obj, hm.clone());
        }
        // tangent to the sphere
        let radial: f64 = grad.iter().zip(&hm).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()).sum();
        for (gr, hr) in grad.iter_mut().zip(&hm) {
            for (x, y) in gr.iter_mut().zip(hr) {
                *x -= radial * y;
            }
        }
        make_orthogonal(basis, &mut grad);
        let gnorm = grad.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>()).sum::<f64>().sqrt();
        if gnorm <= 1e-15 {
            break;
        }
        let eta = cfg.step / (t as f64).sqrt() / gnorm;
        for (hr, gr) in hm.iter_mut().zip(&grad) {
            for (x, y) in hr.iter_mut().zip(gr) {
                *x -= eta * y;
            }
        }
        if !make_feasible(basis, &mut hm) {
            break;
        }
    }
    let obj = objective_and_subgradient(h, sw, &hm, cfg.tie, &mut grad);
    if obj < best.0 {
        best = (obj, hm);
    }
    best
}

fn make_orthogonal(basis: &[Vec<f64>], m: &mut [Vec<f64>]) {
    let n = m.len();
    let dim = m.first().map_or(0, Vec::len);
    for j in 0..dim {
        let mut col: Vec<f64> = (0..n).map(|v| m[v][j]).collect();
        project_out(basis, &mut col);
        for v in 0..n {
            m[v][j] = col[v];
        }
    }
}
