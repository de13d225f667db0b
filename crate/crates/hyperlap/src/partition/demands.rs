use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::demand_sdp::{solve_demand_sdp, DemandSdpConfig};
use crate::error::{Error, Result};
use crate::hypergraph::cut::{cut_weight, edge_range};
use crate::hypergraph::{CutResult, Hypergraph};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

/// Demand `amount` between `source` and `sink`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Demand<T> {
    pub source: usize,
    pub sink: usize,
    pub amount: T,
}

/// A hypergraph with demand pairs; Φ(S) = w(∂S)/Σ_i D_i|χ_S(s_i) − χ_S(t_i)|.
#[derive(Clone, Debug)]
pub struct DemandInstance<T> {
    hypergraph: Hypergraph<T>,
    demands: Vec<Demand<T>>,
}

impl<T: Scalar> DemandInstance<T> {
    pub fn new(hypergraph: Hypergraph<T>, demands: Vec<Demand<T>>) -> Result<Self> {
        if demands.is_empty() {
            return Err(Error::invalid("at least one demand pair is required"));
        }
        for (i, d) in demands.iter().enumerate() {
            if d.source >= hypergraph.n() || d.sink >= hypergraph.n() {
                return Err(Error::invalid(format!("demand {i} names a vertex out of range")));
            }
            if d.source == d.sink {
                return Err(Error::invalid(format!("demand {i} joins vertex {} to itself", d.source)));
            }
            if !(d.amount.is_finite() && d.amount > T::zero()) {
                return Err(Error::invalid(format!("demand {i} has non-positive amount {}", d.amount)));
            }
        }
        Ok(Self { hypergraph, demands })
    }

    pub fn hypergraph(&self) -> &Hypergraph<T> {
        &self.hypergraph
    }

    pub fn demands(&self) -> &[Demand<T>] {
        &self.demands
    }

    /// Distinct vertices appearing in some demand, ascending.
    pub fn terminals(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.demands.iter().flat_map(|d| [d.source, d.sink]).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Σ_i D_i over pairs split by `mask`.
    pub fn separated(&self, mask: &[bool]) -> T {
        self.demands.iter().filter(|d| mask[d.source] != mask[d.sink]).map(|d| d.amount).sum()
    }

    /// Φ(S), or `None` when S separates no pair.
    pub fn sparsity(&self, set: &[usize]) -> Result<Option<T>> {
        let mut mask = vec![false; self.hypergraph.n()];
        for &v in set {
            if v >= mask.len() {
                return Err(Error::domain(format!("vertex {v} out of range")));
            }
            mask[v] = true;
        }
        Ok(self.sparsity_mask(&mask))
    }

    fn sparsity_mask(&self, mask: &[bool]) -> Option<T> {
        let sep = self.separated(mask);
        (sep > T::zero()).then(|| cut_weight(&self.hypergraph, mask) / sep)
    }
}

/// Parses demand lines `s t D`; blank lines and `#` comments are skipped.
pub fn parse_demands<T: Scalar>(text: &str) -> Result<Vec<Demand<T>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [s, t, d] = tokens[..] else {
            return Err(Error::Parse { line, msg: "expected `s t D`".into() });
        };
        let vertex = |tok: &str| tok.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("bad vertex `{tok}`") });
        let amount: f64 = d.parse().map_err(|_| Error::Parse { line, msg: format!("bad demand `{d}`") })?;
        out.push(Demand { source: vertex(s)?, sink: vertex(t)?, amount: T::of(amount) });
    }
    Ok(out)
}

pub fn load_demands<T: Scalar>(path: impl AsRef<Path>) -> Result<Vec<Demand<T>>> {
    parse_demands(&std::fs::read_to_string(path)?)
}

const DEMAND_BRUTE_FORCE_MAX_N: usize = 20;

/// Φ_H by enumerating every cut; returns the value and the side not containing vertex n − 1.
pub fn demand_sparsity_bruteforce<T: Scalar>(inst: &DemandInstance<T>) -> Result<(T, Vec<usize>)> {
    let n = inst.hypergraph.n();
    if n > DEMAND_BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity { what: "n", got: n, max: DEMAND_BRUTE_FORCE_MAX_N });
    }
    let mut best: Option<(T, u32)> = None;
    let mut mask = vec![false; n];
    for bits in 1u32..(1 << (n - 1)) {
        for (v, m) in mask.iter_mut().enumerate() {
            *m = bits >> v & 1 == 1;
        }
        if let Some(phi) = inst.sparsity_mask(&mask) {
            if best.is_none_or(|(b, _)| phi < b) {
                best = Some((phi, bits));
            }
        }
    }
    let (phi, bits) = best.ok_or_else(|| Error::Precondition("no cut separates a demand pair".into()))?;
    Ok((phi, (0..n).filter(|&v| bits >> v & 1 == 1).collect()))
}

/// Coordinates of a contraction of (V, d) into ℓ₂ built from distances to random terminal subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminalEmbedding {
    pub coords: Vec<Vec<f64>>,
    /// Factor the raw map was divided by to make it 1-Lipschitz.
    pub rescale: f64,
    /// max over terminal pairs of d(u,v)/‖f(u) − f(v)‖.
    pub distortion: f64,
}

/// Fréchet map v ↦ (d(v, A_j))_j / √m over random terminal subsets A_j of sizes 1, 2, 4, …,
/// each size repeated ⌈log₂|U|⌉ + 1 times, then scaled down to be 1-Lipschitz on every pair.
pub fn frechet_embedding(dist: &[Vec<f64>], terminals: &[usize], seed: u64) -> TerminalEmbedding {
    let n = dist.len();
    let levels = (terminals.len() as f64).log2().ceil().max(1.0) as usize;
    let mut rng = stream_rng(seed, "frechet", 0);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for level in 0..levels {
        let size = (1usize << level).min(terminals.len());
        for _ in 0..=levels {
            let picked = rand::seq::index::sample(&mut rng, terminals.len(), size);
            subsets.push(picked.into_iter().map(|i| terminals[i]).collect());
        }
    }
    let m = subsets.len() as f64;
    let mut coords: Vec<Vec<f64>> = (0..n)
        .map(|v| subsets.iter().map(|a| a.iter().map(|&t| dist[v][t]).fold(f64::INFINITY, f64::min) / m.sqrt()).collect())
        .collect();
    let diam = dist.iter().flatten().copied().fold(0.0, f64::max);
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let mut rescale: f64 = 1.0;
    for u in 0..n {
        for v in u + 1..n {
            if dist[u][v] > 1e-12 * diam {
                rescale = rescale.max(gap(&coords[u], &coords[v]) / dist[u][v]);
            }
        }
    }
    if rescale > 1.0 {
        coords.iter_mut().flatten().for_each(|x| *x /= rescale);
    }
    let mut distortion: f64 = 1.0;
    for (i, &u) in terminals.iter().enumerate() {
        for &v in &terminals[i + 1..] {
            if dist[u][v] > 1e-12 * diam {
                let g = gap(&coords[u], &coords[v]);
                distortion = distortion.max(if g > 0.0 { dist[u][v] / g } else { f64::INFINITY });
            }
        }
    }
    TerminalEmbedding { coords, rescale, distortion }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandConfig {
    pub sdp: DemandSdpConfig,
    /// Gaussian projections swept; the best cut over all of them is returned.
    pub projections: usize,
}

impl Default for DemandConfig {
    fn default() -> Self {
        Self { sdp: DemandSdpConfig::default(), projections: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandCut<T> {
    pub cut: CutResult<T>,
    /// Φ(S).
    pub sparsity: T,
    /// φ(x) of the projection the cut came from.
    pub line_ratio: f64,
    pub sdp_objective: T,
    pub sdp_violation: f64,
    pub distortion: f64,
    /// 0-based index of the winning projection.
    pub projection: usize,
    pub projections: usize,
}

/// Best prefix {v_1..v_i} of the order sorting x ascending, ignoring prefixes that split no pair.
fn line_sweep(h: &Hypergraph<f64>, pairs: &[(usize, usize, f64)], x: &[f64]) -> Option<(f64, Vec<bool>)> {
    let n = h.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite projection").then(a.cmp(&b)));
    let mut by_vertex: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(s, t, d) in pairs {
        by_vertex[s].push((t, d));
        by_vertex[t].push((s, d));
    }
    let total: f64 = pairs.iter().map(|p| p.2).sum();
    let mut mask = vec![false; n];
    let mut inside = vec![0usize; h.m()];
    let (mut cut, mut sep) = (0.0, 0.0);
    let mut best: Option<(f64, usize)> = None;
    for (i, &v) in order.iter().enumerate().take(n - 1) {
        mask[v] = true;
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
        for &(u, d) in &by_vertex[v] {
            sep += if mask[u] { -d } else { d };
        }
        if sep > 1e-12 * total {
            let phi = cut.max(0.0) / sep;
            if best.is_none_or(|(b, _)| phi < b) {
                best = Some((phi, i + 1));
            }
        }
    }
    best.map(|(phi, len)| {
        let mut m = vec![false; n];
        for &v in &order[..len] {
            m[v] = true;
        }
        (phi, m)
    })
}

/// Sparsest cut with general demands under the default configuration.
pub fn sparsest_cut_demands<T: Scalar>(inst: &DemandInstance<T>, seed: u64) -> Result<DemandCut<T>> {
    sparsest_cut_demands_with(inst, &DemandConfig::default(), seed)
}

/// Solves the relaxation, embeds it through the terminals, projects on Gaussian directions and
/// sweeps each line.
pub fn sparsest_cut_demands_with<T: Scalar>(inst: &DemandInstance<T>, cfg: &DemandConfig, seed: u64) -> Result<DemandCut<T>> {
    let h = &inst.hypergraph;
    let n = h.n();
    if n < 2 {
        return Err(Error::domain("sparsest cut needs at least two vertices"));
    }
    let sol = solve_demand_sdp(inst, &cfg.sdp, seed)?;
    let vecs: Vec<Vec<f64>> = sol.vectors.iter().map(|v| v.iter().map(|x| x.f64()).collect()).collect();
    let dist: Vec<Vec<f64>> = (0..n)
        .map(|u| (0..n).map(|v| vecs[u].iter().zip(&vecs[v]).map(|(a, b)| (a - b) * (a - b)).sum()).collect())
        .collect();
    let emb = frechet_embedding(&dist, &inst.terminals(), seed);
    let h64: Hypergraph<f64> = h.cast();
    let pairs: Vec<(usize, usize, f64)> = inst.demands.iter().map(|d| (d.source, d.sink, d.amount.f64())).collect();
    let dim = emb.coords.first().map_or(0, Vec::len);
    let wanted = cfg.projections.max(1);

    let mut best: Option<(f64, usize, f64, Vec<bool>)> = None;
    let mut done = 0;
    for j in 0..4 * wanted {
        if done == wanted {
            break;
        }
        let mut rng = stream_rng(seed, "demand-projection", j as u64);
        let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let x: Vec<f64> = emb.coords.iter().map(|c| c.iter().zip(&z).map(|(a, b)| a * b).sum()).collect();
        let den: f64 = pairs.iter().map(|&(s, t, d)| d * (x[s] - x[t]).abs()).sum();
        if den <= 0.0 {
            continue;
        }
        let num: f64 = h64
            .edges()
            .iter()
            .map(|e| {
                let (lo, hi) = edge_range(&x, e.vertices());
                e.weight() * (hi - lo)
            })
            .sum();
        let Some((phi, mask)) = line_sweep(&h64, &pairs, &x) else { continue };
        done += 1;
        debug_assert!(phi <= num / den * (1.0 + 1e-9) + 1e-12);
        if best.as_ref().is_none_or(|b| phi < b.0) {
            best = Some((phi, j, num / den, mask));
        }
    }
    let (_, projection, line_ratio, mask) = best.ok_or_else(|| Error::StochasticFailure {
        rounds: 4 * wanted,
        msg: "no projection separated a demand pair".into(),
    })?;
    let sparsity = inst.sparsity_mask(&mask).expect("swept prefix separates a pair");
    Ok(DemandCut {
        cut: CutResult::from_mask(h, &mask),
        sparsity,
        line_ratio,
        sdp_objective: sol.objective,
        sdp_violation: sol.violation,
        distortion: emb.distortion,
        projection,
        projections: done,
    })
}
