use std::collections::HashSet;

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::demands::DemandInstance;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandSdpConfig {
    pub restarts: usize,
    /// Multiplier updates of the augmented Lagrangian.
    pub outer_iterations: usize,
    /// L-BFGS iterations per multiplier update.
    pub inner_iterations: u64,
    /// Target constraint violation.
    pub tolerance: f64,
    /// Up to this many vertices every triple is enforced from the start.
    pub full_triangle_limit: usize,
    /// Random triples probed between multiplier updates on larger instances; `None` uses 8n.
    pub sampled_triples: Option<usize>,
}

impl Default for DemandSdpConfig {
    fn default() -> Self {
        Self {
            restarts: 2,
            outer_iterations: 80,
            inner_iterations: 400,
            tolerance: 1e-9,
            full_triangle_limit: 30,
            sampled_triples: None,
        }
    }
}

/// Vectors v̄_u normalized so that Σ_i D_i‖s̄_i − t̄_i‖² = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandSdpSolution<T> {
    pub vectors: Vec<Vec<T>>,
    /// Σ_e w_e max_{u,v∈e}‖ū − v̄‖².
    pub objective: T,
    /// Largest violation of ‖ū − w̄‖² ≤ ‖ū − v̄‖² + ‖v̄ − w̄‖² over the enforced triples.
    pub violation: f64,
    pub restart: usize,
    pub outer_iterations: usize,
}

/// Inequality g ≤ 0 as a signed combination of squared distances, minus an optional epigraph
/// variable.
#[derive(Clone, Debug)]
struct Constraint {
    terms: Vec<(usize, usize, f64)>,
    epigraph: Option<usize>,
}

struct Lagrangian<'a> {
    n: usize,
    weights: &'a [f64],
    pairs: &'a [(usize, usize, f64)],
    constraints: &'a [Constraint],
    mu: &'a [f64],
    lambda: f64,
    rho: f64,
}

fn dist(n: usize, x: &[f64], a: usize, b: usize) -> f64 {
    x[a * n..(a + 1) * n].iter().zip(&x[b * n..(b + 1) * n]).map(|(p, q)| (p - q) * (p - q)).sum()
}

fn add_dist_grad(n: usize, x: &[f64], grad: &mut [f64], a: usize, b: usize, coef: f64) {
    for c in 0..n {
        let g = 2.0 * coef * (x[a * n + c] - x[b * n + c]);
        grad[a * n + c] += g;
        grad[b * n + c] -= g;
    }
}

impl Lagrangian<'_> {
    fn den(&self, x: &[f64]) -> f64 {
        self.pairs.iter().map(|&(s, t, d)| d * dist(self.n, x, s, t)).sum()
    }

    fn value(&self, c: &Constraint, x: &[f64]) -> f64 {
        let g: f64 = c.terms.iter().map(|&(a, b, s)| s * dist(self.n, x, a, b)).sum();
        g - c.epigraph.map_or(0.0, |e| x[self.n * self.n + e])
    }
}

impl CostFunction for Lagrangian<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let base = self.n * self.n;
        let mut total: f64 = self.weights.iter().zip(&x[base..]).map(|(w, t)| w * t).sum();
        let h = self.den(x) - 1.0;
        total += self.lambda * h + 0.5 * self.rho * h * h;
        for (c, &mu) in self.constraints.iter().zip(self.mu) {
            let s = (mu + self.rho * self.value(c, x)).max(0.0);
            total += (s * s - mu * mu) / (2.0 * self.rho);
        }
        Ok(total)
    }
}

impl Gradient for Lagrangian<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, x: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        let n = self.n;
        let base = n * n;
        let mut grad = vec![0.0; x.len()];
        grad[base..].copy_from_slice(self.weights);
        let ch = self.lambda + self.rho * (self.den(x) - 1.0);
        for &(s, t, d) in self.pairs {
            add_dist_grad(n, x, &mut grad, s, t, ch * d);
        }
        for (c, &mu) in self.constraints.iter().zip(self.mu) {
            let s = (mu + self.rho * self.value(c, x)).max(0.0);
            if s == 0.0 {
                continue;
            }
            for &(a, b, sign) in &c.terms {
                add_dist_grad(n, x, &mut grad, a, b, s * sign);
            }
            if let Some(e) = c.epigraph {
                grad[base + e] -= s;
            }
        }
        Ok(grad)
    }
}

fn triangle(t: [usize; 3]) -> [Constraint; 3] {
    let [a, b, c] = t;
    [(a, b, c), (b, a, c), (a, c, b)]
        .map(|(x, m, y)| Constraint { terms: vec![(x, y, 1.0), (x, m, -1.0), (m, y, -1.0)], epigraph: None })
}

struct Problem {
    n: usize,
    weights: Vec<f64>,
    edges: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize, f64)>,
    base: Vec<Constraint>,
    triples: Vec<[usize; 3]>,
    probes: usize,
}

struct Outcome {
    x: Vec<f64>,
    objective: f64,
    violation: f64,
    outer: usize,
}

impl Problem {
    /// max_{u,v∈e}‖ū − v̄‖².
    fn span(&self, x: &[f64], vs: &[usize]) -> f64 {
        let mut best: f64 = 0.0;
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                best = best.max(dist(self.n, x, a, b));
            }
        }
        best
    }

    fn objective(&self, x: &[f64]) -> f64 {
        self.edges.iter().zip(&self.weights).map(|(vs, w)| w * self.span(x, vs)).sum()
    }

    fn triangle_violation(&self, x: &[f64], triples: &[[usize; 3]]) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for &[a, b, c] in triples {
            let (ab, bc, ac) = (dist(n, x, a, b), dist(n, x, b, c), dist(n, x, a, c));
            worst = worst.max(ac - ab - bc).max(ab - ac - bc).max(bc - ab - ac);
        }
        worst
    }

    /// Rescales the factor to meet the demand normalization exactly.
    fn normalize(&self, x: &mut [f64]) -> bool {
        let n = self.n;
        let den: f64 = self.pairs.iter().map(|&(s, t, d)| d * dist(n, x, s, t)).sum();
        if !(den.is_finite() && den > 1e-300) {
            return false;
        }
        let s = den.sqrt();
        x[..n * n].iter_mut().for_each(|v| *v /= s);
        true
    }

    fn solve(&self, cfg: &DemandSdpConfig, restart: usize, seed: u64) -> Option<Outcome> {
        let n = self.n;
        let base = n * n;
        let mut rng = stream_rng(seed, "demand-sdp", restart as u64);
        let mut x: Vec<f64> = (0..base).map(|_| StandardNormal.sample(&mut rng)).collect();
        if !self.normalize(&mut x) {
            return None;
        }
        let spans: Vec<f64> = self.edges.iter().map(|vs| self.span(&x, vs)).collect();
        x.extend(spans);

        let mut triples = self.triples.clone();
        let mut seen: HashSet<[usize; 3]> = triples.iter().copied().collect();
        let mut constraints = self.base.clone();
        constraints.extend(triples.iter().flat_map(|&t| triangle(t)));
        let mut mu = vec![0.0; constraints.len()];
        let mut lambda = 0.0;
        let mut rho = 10.0;
        let mut previous = f64::INFINITY;
        let mut outer = 0;
        for it in 0..cfg.outer_iterations.max(1) {
            outer = it + 1;
            let problem = Lagrangian { n, weights: &self.weights, pairs: &self.pairs, constraints: &constraints, mu: &mu, lambda, rho };
            let solver = LBFGS::new(MoreThuenteLineSearch::new(), 10)
                .with_tolerance_grad(1e-12)
                .ok()?
                .with_tolerance_cost(1e-16)
                .ok()?;
            let result = Executor::new(problem, solver)
                .configure(|s| s.param(x.clone()).max_iters(cfg.inner_iterations))
                .run();
            if let Ok(res) = result {
                if let Some(p) = res.state().get_best_param() {
                    if p.iter().all(|v| v.is_finite()) {
                        x = p.clone();
                    }
                }
            }
            let problem = Lagrangian { n, weights: &self.weights, pairs: &self.pairs, constraints: &constraints, mu: &mu, lambda, rho };
            let h = problem.den(&x) - 1.0;
            let values: Vec<f64> = constraints.iter().map(|c| problem.value(c, &x)).collect();
            lambda += rho * h;
            for (m, g) in mu.iter_mut().zip(&values) {
                *m = (*m + rho * g).max(0.0);
            }
            let residual = values.iter().zip(&mu).fold(h.abs(), |acc, (&g, &m)| acc.max(g.max(-m / rho).abs()));
            let infeasible = values.iter().fold(h.abs(), |acc, &g| acc.max(g));

            for _ in 0..self.probes {
                let mut t = [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)];
                t.sort_unstable();
                if t[0] == t[1] || t[1] == t[2] || seen.contains(&t) {
                    continue;
                }
                if self.triangle_violation(&x[..base], &[t]) > cfg.tolerance {
                    seen.insert(t);
                    triples.push(t);
                    constraints.extend(triangle(t));
                    mu.extend([0.0; 3]);
                }
            }

            if residual <= cfg.tolerance {
                break;
            }
            if infeasible > 0.25 * previous {
                rho = (rho * 10.0).min(1e10);
            }
            previous = infeasible;
        }
        x.truncate(base);
        if !self.normalize(&mut x) {
            return None;
        }
        let objective = self.objective(&x);
        let violation = self.triangle_violation(&x, &triples);
        Some(Outcome { x, objective, violation, outer })
    }
}

/// Solves the demand relaxation in factor form with an augmented Lagrangian: epigraph variables
/// t_e ≥ ‖ū − v̄‖² for pairs inside each edge, the demand normalization as an equality and the
/// triangle inequalities as cuts. Restarts run in parallel.
pub fn solve_demand_sdp<T: Scalar>(inst: &DemandInstance<T>, cfg: &DemandSdpConfig, seed: u64) -> Result<DemandSdpSolution<T>> {
    let h = inst.hypergraph();
    let n = h.n();
    let (weights, edges): (Vec<f64>, Vec<Vec<usize>>) =
        h.edges().iter().filter(|e| e.len() > 1).map(|e| (e.weight().f64(), e.vertices().to_vec())).unzip();
    let pairs: Vec<(usize, usize, f64)> = inst.demands().iter().map(|d| (d.source, d.sink, d.amount.f64())).collect();
    let mut base = Vec::new();
    for (e, vs) in edges.iter().enumerate() {
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                base.push(Constraint { terms: vec![(a, b, 1.0)], epigraph: Some(e) });
            }
        }
    }
    let candidates: Vec<usize> = if n <= cfg.full_triangle_limit {
        (0..n).collect()
    } else {
        let t = inst.terminals();
        if t.len() <= cfg.full_triangle_limit {
            t
        } else {
            Vec::new()
        }
    };
    let mut triples = Vec::new();
    for (i, &a) in candidates.iter().enumerate() {
        for (j, &b) in candidates.iter().enumerate().skip(i + 1) {
            for &c in &candidates[j + 1..] {
                triples.push([a, b, c]);
            }
        }
    }
    let probes = if n > cfg.full_triangle_limit { cfg.sampled_triples.unwrap_or(8 * n) } else { 0 };
    let problem = Problem { n, weights, edges, pairs, base, triples, probes };

    let best = (0..cfg.restarts.max(1))
        .into_par_iter()
        .filter_map(|r| problem.solve(cfg, r, seed).map(|o| (r, o)))
        .reduce_with(|a, b| {
            let key = |o: &Outcome| (o.violation > cfg.tolerance.sqrt(), o.objective);
            if key(&b.1) < key(&a.1) || (key(&b.1) == key(&a.1) && b.0 < a.0) {
                b
            } else {
                a
            }
        });
    let (restart, out) =
        best.ok_or_else(|| Error::Convergence { msg: "every restart collapsed the demand pairs".into(), residual: f64::NAN })?;
    if !out.objective.is_finite() {
        return Err(Error::Convergence { msg: "demand relaxation produced a non-finite value".into(), residual: out.violation });
    }
    Ok(DemandSdpSolution {
        vectors: out.x.chunks(n).map(|row| row.iter().map(|&v| T::of(v)).collect()).collect(),
        objective: T::of(out.objective),
        violation: out.violation,
        restart,
        outer_iterations: out.outer,
    })
}
