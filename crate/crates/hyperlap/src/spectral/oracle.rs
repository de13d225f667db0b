//! Exact γ_k for tiny hypergraphs.
//!
//! Every vector induces a weak ordering of the vertices (its level sets, sorted). Inside the open
//! face of vectors sharing one weak ordering, the numerator of D_w is the fixed quadratic form
//! Σ_e w_e (y_top(e) − y_bottom(e))² in the block values y, so a minimizer restricted to its own
//! face is an eigenvector of a small generalized symmetric eigenproblem. Enumerating all weak
//! orderings and evaluating D_w on every such eigenvector yields the exact minimum.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::{orthonormalize_against, Method, MinimizerSet};
use crate::error::{Error, Result};
use crate::hypergraph::cut::discrepancy_weighted;
use crate::hypergraph::{Hypergraph, SpaceVector};
use crate::scalar::Scalar;

pub const ORACLE_MAX_N: usize = 8;

/// Minimum of D_w over vectors weighted-orthogonal to `prior`, with a unit-norm minimizer.
pub fn exact_gamma<T: Scalar>(h: &Hypergraph<T>, prior: &MinimizerSet<T>) -> Result<(T, SpaceVector<T>)> {
    let n = h.n();
    if n > ORACLE_MAX_N {
        return Err(Error::Capacity { what: "vertex count", got: n, max: ORACLE_MAX_N });
    }
    if prior.len() >= n {
        return Err(Error::domain("prior already spans the whole space"));
    }
    let h64: Hypergraph<f64> = h.cast();
    let prior64: Vec<Vec<f64>> = prior.vectors.iter().map(|f| f.iter().map(|x| x.f64()).collect()).collect();
    let partitions = set_partitions(n);
    let best = partitions
        .par_iter()
        .map(|blocks| best_over_orderings(&h64, &prior64, blocks))
        .reduce(|| None, |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        });
    let (_, f) = best.ok_or_else(|| Error::domain("no vector is orthogonal to the prior"))?;
    let w64 = h64.weights().to_vec();
    let f = orthonormalize_against(&w64, &prior64, &f).unwrap_or(f);
    let value = discrepancy_weighted(&h64, &f)?;
    let f: Vec<T> = f.iter().map(|&x| T::of(x)).collect();
    Ok((T::of(value), SpaceVector::weighted(f)))
}

/// γ₁..γ_k with f₁ = 1/‖1‖_w and each later minimizer orthogonal to the earlier ones.
pub fn exact_minimizers<T: Scalar>(h: &Hypergraph<T>, k: usize) -> Result<MinimizerSet<T>> {
    if k == 0 || k > h.n() {
        return Err(Error::domain(format!("k = {k} must lie in 1..={}", h.n())));
    }
    let mut set = MinimizerSet::constant(h, Method::Oracle);
    while set.len() < k {
        let (_, f) = exact_gamma(h, &set)?;
        set.push(h, f.into_values())?;
    }
    Ok(set)
}

/// All set partitions of 0..n as block-index vectors (restricted growth strings).
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            rec(i + 1, max.max(b), cur, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut cur, &mut out);
    }
    out
}

/// Best candidate over all orderings of one partition's blocks. An ordering and its reverse pose
/// the same problem, so only orderings whose first block label is below its last are visited.
fn best_over_orderings(h: &Hypergraph<f64>, prior: &[Vec<f64>], blocks: &[usize]) -> Option<(f64, Vec<f64>)> {
    let m = blocks.iter().max().map_or(0, |&b| b + 1);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |perm: &[usize]| {
        if m >= 2 && perm[0] > perm[m - 1] {
            return;
        }
        // rank[b] = position of block b in the ordering
        let mut rank = vec![0usize; m];
        for (pos, &b) in perm.iter().enumerate() {
            rank[b] = pos;
        }
        let level: Vec<usize> = blocks.iter().map(|&b| rank[b]).collect();
        if let Some(c) = face_minimum(h, prior, &level, m) {
            if best.as_ref().is_none_or(|b| c.0 < b.0) {
                best = Some(c);
            }
        }
    };
    heap_permutations(&mut perm, &mut consider);
    best
}

fn heap_permutations(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Evaluates D_w on every eigenvector of the face with vertex levels `level` (0..m).
fn face_minimum(h: &Hypergraph<f64>, prior: &[Vec<f64>], level: &[usize], m: usize) -> Option<(f64, Vec<f64>)> {
    let w = h.weights();
    let mut wb = vec![0.0; m];
    for (v, &l) in level.iter().enumerate() {
        wb[l] += w[v];
    }
    let isq: Vec<f64> = wb.iter().map(|x| 1.0 / x.sqrt()).collect();
    // quadratic form in z = W_B^{1/2} y
    let mut q = DMatrix::<f64>::zeros(m, m);
    for e in h.edges() {
        let lo = e.vertices().iter().map(|&v| level[v]).min().expect("non-empty");
        let hi = e.vertices().iter().map(|&v| level[v]).max().expect("non-empty");
        if lo != hi {
            let a = e.weight();
            q[(lo, lo)] += a * isq[lo] * isq[lo];
            q[(hi, hi)] += a * isq[hi] * isq[hi];
            q[(lo, hi)] -= a * isq[lo] * isq[hi];
            q[(hi, lo)] -= a * isq[lo] * isq[hi];
        }
    }
    // orthonormal basis of {z : Σ_b z_b c_i(b)/√W_b = 0 for every prior f_i}
    let mut cons: Vec<Vec<f64>> = Vec::new();
    for f in prior {
        let mut c = vec![0.0; m];
        for (v, &l) in level.iter().enumerate() {
            c[l] += w[v] * f[v];
        }
        let mut c: Vec<f64> = c.iter().zip(&isq).map(|(a, b)| a * b).collect();
        gram_schmidt_step(&cons, &mut c);
        let nc = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nc > 1e-10 {
            cons.push(c.into_iter().map(|x| x / nc).collect());
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        if basis.len() + cons.len() == m {
            break;
        }
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        gram_schmidt_step(&cons, &mut e);
        gram_schmidt_step(&basis, &mut e);
        let ne = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if ne > 1e-8 {
            basis.push(e.into_iter().map(|x| x / ne).collect());
        }
    }
    let d = basis.len();
    if d == 0 {
        return None;
    }
    let nmat = DMatrix::from_fn(m, d, |i, j| basis[j][i]);
    let k = nmat.transpose() * &q * &nmat;
    let eig = SymmetricEigen::new(k);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for j in 0..d {
        let z = &nmat * eig.eigenvectors.column(j);
        let f: Vec<f64> = level.iter().map(|&l| z[l] * isq[l]).collect();
        if let Ok(value) = discrepancy_weighted(h, &f) {
            if best.as_ref().is_none_or(|b| value < b.0) {
                best = Some((value, f));
            }
        }
    }
    best
}

fn gram_schmidt_step(basis: &[Vec<f64>], v: &mut [f64]) {
    for _ in 0..2 {
        for b in basis {
            let c: f64 = b.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_weak_orderings() {
        let bell: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15, 52, 203]);
        let mut count = 0;
        heap_permutations(&mut [0, 1, 2, 3], &mut |_| count += 1);
        assert_eq!(count, 24);
    }

    #[test]
    fn disconnected_gap_is_zero() {
        let h = Hypergraph::<f64>::new(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let (gamma, f) = exact_gamma(&h, &MinimizerSet::constant(&h, Method::Oracle)).unwrap();
        assert!(gamma.abs() < 1e-12);
        let f = f.values();
        assert!((f[0] - f[1]).abs() < 1e-9 && (f[2] - f[3]).abs() < 1e-9);
    }
}
