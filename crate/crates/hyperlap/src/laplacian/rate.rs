use std::collections::BTreeMap;

use crate::densest::{solve_densest, DensestInstance, FlowNetwork};
use crate::hypergraph::{Hypergraph, SpaceVector};
use crate::scalar::Scalar;

/// Tuning for [`compute_rate_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateConfig {
    /// Relative tolerance under which two coordinates count as equal.
    pub tie: f64,
}

impl Default for RateConfig {
    fn default() -> Self {
        Self { tie: 1e-9 }
    }
}

/// How one hyperedge participates in the diffusion at the current vector.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeActivity<T> {
    /// Vertices attaining the minimum (within the tie tolerance).
    pub infimum: Vec<usize>,
    /// Vertices attaining the maximum.
    pub supremum: Vec<usize>,
    /// Δ_e = max − min over the edge.
    pub spread: T,
    /// Net measure rate ρ_u(e) per vertex, non-zero entries only.
    pub flows: Vec<(usize, T)>,
    /// a^e_{uv} for u ∈ S_e, v ∈ I_e. Edges with Δ_e = 0 keep their weight on the diagonal.
    pub distribution: Vec<(usize, usize, T)>,
}

impl<T: Scalar> EdgeActivity<T> {
    pub fn is_active(&self) -> bool {
        self.spread > T::zero()
    }
}

/// The rate vector r = df/dt together with the per-edge flows that realise it.
#[derive(Clone, Debug, PartialEq)]
pub struct RateResult<T> {
    /// r in weighted space; L_w f = −r.
    pub rate: Vec<T>,
    /// ρ = W r.
    pub measure_rate: Vec<T>,
    pub edges: Vec<EdgeActivity<T>>,
}

impl<T: Scalar> RateResult<T> {
    /// Symmetric pair weights A_f as a sparse upper triangle (u ≤ v), with diagonals
    /// filled so that every row sums to w_u.
    pub fn induced_weights(&self, w: &[T]) -> BTreeMap<(usize, usize), T> {
        let mut a = BTreeMap::new();
        let mut off = vec![T::zero(); w.len()];
        for e in &self.edges {
            for &(u, v, x) in &e.distribution {
                if u != v {
                    *a.entry((u.min(v), u.max(v))).or_insert(T::zero()) += x;
                    off[u] += x;
                    off[v] += x;
                }
            }
        }
        for (u, &wu) in w.iter().enumerate() {
            let d = wu - off[u];
            if d != T::zero() {
                a.insert((u, u), d);
            }
        }
        a
    }

    /// Dense A_f for small instances.
    pub fn induced_matrix(&self, w: &[T]) -> Vec<Vec<T>> {
        let n = w.len();
        let mut m = vec![vec![T::zero(); n]; n];
        for ((u, v), x) in self.induced_weights(w) {
            m[u][v] = x;
            m[v][u] = x;
        }
        m
    }
}

/// Rate vector of the diffusion at weighted-space vector `f`, with the default tie tolerance.
pub fn compute_rate<T: Scalar>(h: &Hypergraph<T>, f: &SpaceVector<T>) -> RateResult<T> {
    compute_rate_with(h, f, RateConfig::default())
}

pub fn compute_rate_with<T: Scalar>(h: &Hypergraph<T>, f: &SpaceVector<T>, cfg: RateConfig) -> RateResult<T> {
    let f = f.weighted_values(h.weights());
    rate_weighted(h, &f, cfg)
}

pub(crate) fn rate_weighted<T: Scalar>(h: &Hypergraph<T>, f: &[T], cfg: RateConfig) -> RateResult<T> {
    let n = h.n();
    assert_eq!(f.len(), n, "vector length does not match the hypergraph");
    let w = h.weights();
    let fmax = f.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let tol = T::tol(cfg.tie) * (T::one() + fmax);

    // equivalence classes of (nearly) equal coordinates, numbered in increasing order of f
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].partial_cmp(&f[b]).expect("finite vector").then(a.cmp(&b)));
    let mut class = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut anchor = T::zero();
    for &v in &order {
        if members.is_empty() || f[v] - anchor > tol {
            members.push(Vec::new());
            anchor = f[v];
        }
        class[v] = members.len() - 1;
        members.last_mut().expect("pushed").push(v);
    }

    let mut edges: Vec<EdgeActivity<T>> = Vec::with_capacity(h.m());
    let mut values = vec![T::zero(); h.m()];
    let mut entering: Vec<Vec<usize>> = vec![Vec::new(); members.len()];
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); members.len()];
    for (id, e) in h.edges().iter().enumerate() {
        let vs = e.vertices();
        let lo = vs.iter().map(|&v| class[v]).min().expect("non-empty edge");
        let hi = vs.iter().map(|&v| class[v]).max().expect("non-empty edge");
        if lo == hi {
            let share = e.weight() / T::of_usize(vs.len());
            edges.push(EdgeActivity {
                infimum: vs.to_vec(),
                supremum: vs.to_vec(),
                spread: T::zero(),
                flows: Vec::new(),
                distribution: vs.iter().map(|&v| (v, v, share)).collect(),
            });
            continue;
        }
        let (fmin, fmax) = vs.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(f[v]), b.max(f[v])));
        let spread = fmax - fmin;
        values[id] = e.weight() * spread;
        entering[lo].push(id);
        leaving[hi].push(id);
        edges.push(EdgeActivity {
            infimum: vs.iter().copied().filter(|&v| class[v] == lo).collect(),
            supremum: vs.iter().copied().filter(|&v| class[v] == hi).collect(),
            spread,
            flows: Vec::new(),
            distribution: Vec::new(),
        });
    }

    let mut rate = vec![T::zero(); n];
    let mut flows: Vec<Vec<(usize, T)>> = vec![Vec::new(); h.m()];
    for (c, verts) in members.iter().enumerate() {
        if entering[c].is_empty() && leaving[c].is_empty() {
            continue;
        }
        peel_class(h, verts, &entering[c], &leaving[c], &edges, &values, &mut rate, &mut flows);
    }

    for (id, e) in edges.iter_mut().enumerate() {
        if !e.is_active() {
            continue;
        }
        let mut fl = std::mem::take(&mut flows[id]);
        fl.sort_by_key(|&(v, _)| v);
        let give: Vec<(usize, T)> = fl.iter().filter(|p| p.1 < T::zero()).map(|&(u, x)| (u, -x / e.spread)).collect();
        let take: Vec<(usize, T)> = fl.iter().filter(|p| p.1 > T::zero()).map(|&(v, x)| (v, x / e.spread)).collect();
        e.distribution = transport(&give, &take);
        e.flows = fl;
    }

    let measure_rate = rate.iter().zip(w).map(|(&r, &wu)| r * wu).collect();
    RateResult { rate, measure_rate, edges }
}

/// Peels maximal densest subsets off one equivalence class and routes the per-edge flows.
#[allow(clippy::too_many_arguments)]
fn peel_class<T: Scalar>(
    h: &Hypergraph<T>,
    verts: &[usize],
    entering: &[usize],
    leaving: &[usize],
    edges: &[EdgeActivity<T>],
    values: &[T],
    rate: &mut [T],
    flows: &mut [Vec<(usize, T)>],
) {
    let mut local = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        local.insert(v, i);
    }
    let to_local = |set: &[usize]| set.iter().map(|v| local[v]).collect::<Vec<_>>();
    let mut inst = DensestInstance::new(
        verts.iter().map(|&v| h.vertex_weight(v)).collect(),
        entering.iter().map(|&e| (to_local(&edges[e].infimum), values[e])).collect(),
        leaving.iter().map(|&e| (to_local(&edges[e].supremum), values[e])).collect(),
    )
    .expect("class instance is valid");
    let mut ids_in = entering.to_vec();
    let mut ids_out = leaving.to_vec();
    let mut global: Vec<usize> = verts.to_vec();
    loop {
        let sol = if inst.in_edges().is_empty() && inst.out_edges().is_empty() {
            None
        } else {
            Some(solve_densest(&inst))
        };
        let (p, density) = match sol {
            Some(s) => (s.subset, s.density),
            None => ((0..inst.len()).collect(), T::zero()),
        };
        let mut inside = vec![false; inst.len()];
        for &v in &p {
            inside[v] = true;
            rate[global[v]] = density;
        }
        let consumed_in: Vec<usize> =
            (0..ids_in.len()).filter(|&i| inst.in_edges()[i].vertices.iter().all(|&v| inside[v])).collect();
        let consumed_out: Vec<usize> =
            (0..ids_out.len()).filter(|&j| inst.out_edges()[j].vertices.iter().any(|&v| inside[v])).collect();
        route_layer(&inst, &global, &p, density, &consumed_in, &consumed_out, &ids_in, &ids_out, flows);
        match inst.remove(&p) {
            None => break,
            Some((rest, keep)) => {
                ids_in = (0..ids_in.len()).filter(|i| !consumed_in.contains(i)).map(|i| ids_in[i]).collect();
                ids_out = (0..ids_out.len()).filter(|j| !consumed_out.contains(j)).map(|j| ids_out[j]).collect();
                global = keep.iter().map(|&v| global[v]).collect();
                inst = rest;
            }
        }
    }
}

/// Splits the layer's edge values among its vertices: in-edges supply c_e, every vertex absorbs
/// w_v·δ and out-edges drain c_e.
#[allow(clippy::too_many_arguments)]
fn route_layer<T: Scalar>(
    inst: &DensestInstance<T>,
    global: &[usize],
    p: &[usize],
    density: T,
    consumed_in: &[usize],
    consumed_out: &[usize],
    ids_in: &[usize],
    ids_out: &[usize],
    flows: &mut [Vec<(usize, T)>],
) {
    if consumed_in.is_empty() && consumed_out.is_empty() {
        return;
    }
    if p.len() == 1 {
        let v = global[p[0]];
        for &i in consumed_in {
            flows[ids_in[i]].push((v, inst.in_edges()[i].value));
        }
        for &j in consumed_out {
            flows[ids_out[j]].push((v, -inst.out_edges()[j].value));
        }
        return;
    }
    let mut pos = vec![usize::MAX; inst.len()];
    for (i, &v) in p.iter().enumerate() {
        pos[v] = i;
    }
    let (s, t) = (0, 1);
    let node = |v: usize| 2 + pos[v];
    let base_in = 2 + p.len();
    let base_out = base_in + consumed_in.len();
    let mut g = FlowNetwork::new(base_out + consumed_out.len());
    let total: T = consumed_in.iter().map(|&i| inst.in_edges()[i].value).sum::<T>()
        + consumed_out.iter().map(|&j| inst.out_edges()[j].value).sum::<T>()
        + p.iter().map(|&v| (inst.weights()[v] * density).abs()).sum::<T>();
    let inf = T::one() + total;
    let mut in_arcs = Vec::new();
    for (k, &i) in consumed_in.iter().enumerate() {
        let e = &inst.in_edges()[i];
        g.add_edge(s, base_in + k, e.value);
        for &v in &e.vertices {
            in_arcs.push((ids_in[i], global[v], g.add_edge(base_in + k, node(v), inf)));
        }
    }
    let mut out_arcs = Vec::new();
    for (k, &j) in consumed_out.iter().enumerate() {
        let e = &inst.out_edges()[j];
        for &v in e.vertices.iter().filter(|&&v| pos[v] != usize::MAX) {
            out_arcs.push((ids_out[j], global[v], g.add_edge(node(v), base_out + k, inf)));
        }
        g.add_edge(base_out + k, t, e.value);
    }
    for &v in p {
        let demand = inst.weights()[v] * density;
        if demand >= T::zero() {
            g.add_edge(node(v), t, demand);
        } else {
            g.add_edge(s, node(v), -demand);
        }
    }
    let supply: T = consumed_in.iter().map(|&i| inst.in_edges()[i].value).sum::<T>()
        + p.iter().map(|&v| (-inst.weights()[v] * density).max(T::zero())).sum::<T>();
    let value = g.max_flow(s, t).value;
    if (value - supply).abs() > T::tol(1e-8) * (T::one() + supply) {
        log::warn!("layer flow {value} falls short of supply {supply}");
    }
    for (e, v, arc) in in_arcs {
        let x = g.flow(arc);
        if x > T::zero() {
            flows[e].push((v, x));
        }
    }
    for (e, v, arc) in out_arcs {
        let x = g.flow(arc);
        if x > T::zero() {
            flows[e].push((v, -x));
        }
    }
}

/// North-west corner transport plan between two lists of (vertex, amount). Rounding leftovers
/// are absorbed by the last receiver.
fn transport<T: Scalar>(give: &[(usize, T)], take: &[(usize, T)]) -> Vec<(usize, usize, T)> {
    let mut plan = Vec::new();
    if take.is_empty() {
        return plan;
    }
    let mut j = 0;
    let mut left_j = take[0].1;
    for &(u, amount) in give {
        let mut left = amount;
        while left > T::zero() {
            let last = j + 1 == take.len();
            let x = if last { left } else { left.min(left_j) };
            plan.push((u, take[j].0, x));
            left -= x;
            left_j -= x;
            if !last && left_j <= T::zero() {
                j += 1;
                left_j = take[j].1;
            }
        }
    }
    plan
}
