//! Dinic max-flow over floating-point capacities.

use std::collections::VecDeque;

use crate::scalar::Scalar;

#[derive(Clone, Debug)]
struct Arc<T> {
    to: usize,
    cap: T,
    flow: T,
}

/// Directed network with residual bookkeeping. Arc `2k` is the k-th added arc, `2k+1` its reverse.
#[derive(Clone, Debug)]
pub struct FlowNetwork<T> {
    arcs: Vec<Arc<T>>,
    adj: Vec<Vec<usize>>,
    eps: T,
}

/// Result of [`FlowNetwork::max_flow`].
#[derive(Clone, Debug, PartialEq)]
pub struct MaxFlow<T> {
    pub value: T,
    /// Nodes reachable from the source in the residual graph (the minimal min-cut source side).
    pub source_side: Vec<bool>,
    /// Nodes that cannot reach the sink in the residual graph (the maximal min-cut source side).
    pub maximal_source_side: Vec<bool>,
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new(nodes: usize) -> Self {
        Self { arcs: Vec::new(), adj: vec![Vec::new(); nodes], eps: T::zero() }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Adds an arc and returns its id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: T) -> usize {
        assert!(cap >= T::zero(), "negative capacity");
        let id = self.arcs.len();
        self.adj[from].push(id);
        self.arcs.push(Arc { to, cap, flow: T::zero() });
        self.adj[to].push(id + 1);
        self.arcs.push(Arc { to: from, cap: T::zero(), flow: T::zero() });
        id / 2
    }

    /// Flow currently routed on arc `id`.
    pub fn flow(&self, id: usize) -> T {
        self.arcs[2 * id].flow
    }

    fn residual(&self, a: usize) -> T {
        self.arcs[a].cap - self.arcs[a].flow
    }

    fn open(&self, a: usize) -> bool {
        self.residual(a) > self.eps
    }

    /// Maximum flow from `s` to `t`. Residual capacities below a relative epsilon count as saturated.
    pub fn max_flow(&mut self, s: usize, t: usize) -> MaxFlow<T> {
        let scale = self.arcs.iter().step_by(2).map(|a| a.cap).fold(T::zero(), T::max);
        self.eps = scale * T::epsilon() * T::of(256.0);
        let n = self.nodes();
        let mut value = T::zero();
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                break;
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = self.augment(s, t, T::infinity(), &level, &mut next);
                if pushed <= self.eps {
                    break;
                }
                value += pushed;
            }
        }
        let source_side = self.levels(s).into_iter().map(|l| l != usize::MAX).collect();
        let maximal_source_side = self.reaches_sink(t).into_iter().map(|r| !r).collect();
        MaxFlow { value, source_side, maximal_source_side }
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.nodes()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if level[v] == usize::MAX && self.open(a) {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, limit: T, level: &[usize], next: &mut [usize]) -> T {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.arcs[a].to;
            if level[v] == level[u] + 1 && self.open(a) {
                let pushed = self.augment(v, t, limit.min(self.residual(a)), level, next);
                if pushed > T::zero() {
                    self.arcs[a].flow += pushed;
                    self.arcs[a ^ 1].flow -= pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        T::zero()
    }

    /// Nodes with a residual path to `t`.
    fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            // arc u→v is open iff the reverse of an arc stored at v points to u
            for &b in &self.adj[v] {
                let a = b ^ 1;
                let u = self.arcs[b].to;
                if !seen[u] && self.open(a) {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}
