//! Procedural discrepancy minimizers: an exact oracle for tiny hypergraphs and the
//! SDP-relaxation pipeline with Gaussian rounding for everything else.

mod oracle;
mod report;
mod rounding;
mod sdp;

pub use oracle::{exact_gamma, exact_minimizers, ORACLE_MAX_N};
pub use report::{minimaximizer_report, MinimaximizerReport};
pub use rounding::{approx_procedural_minimizers, gaussian_round, ROUNDING_TRIALS};
pub use sdp::{solve_sdp, GramSolution, SdpConfig};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::cut::discrepancy_weighted;
use crate::hypergraph::Hypergraph;
use crate::scalar::{wdot, Scalar};

/// How a minimizer set was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Sdp,
    Given,
}

/// Orthonormal vectors f₁..f_k in weighted space with their discrepancy ratios.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerSet<T> {
    pub vectors: Vec<Vec<T>>,
    pub ratios: Vec<T>,
    pub method: Method,
    pub seed: Option<u64>,
    /// Largest constraint residual of each SDP solve (empty for other methods).
    pub residuals: Vec<T>,
}

impl<T: Scalar> MinimizerSet<T> {
    /// An empty prior.
    pub fn empty(method: Method) -> Self {
        Self { vectors: Vec::new(), ratios: Vec::new(), method, seed: None, residuals: Vec::new() }
    }

    /// {1/‖1‖_w}.
    pub fn constant(h: &Hypergraph<T>, method: Method) -> Self {
        let c = T::one() / h.total_weight().sqrt();
        let mut set = Self::empty(method);
        set.vectors.push(vec![c; h.n()]);
        set.ratios.push(T::zero());
        set
    }

    /// Wraps caller-supplied vectors after checking they are orthogonal; each is normalized.
    pub fn from_vectors(h: &Hypergraph<T>, vectors: Vec<Vec<T>>, method: Method) -> Result<Self> {
        let w = h.weights();
        let mut set = Self::empty(method);
        for f in vectors {
            if f.len() != h.n() {
                return Err(Error::domain("minimizer has the wrong length"));
            }
            let nf = wdot(w, &f, &f).sqrt();
            if nf <= T::zero() {
                return Err(Error::domain("minimizer set contains the zero vector"));
            }
            let f: Vec<T> = f.iter().map(|&x| x / nf).collect();
            for g in &set.vectors {
                if wdot(w, &f, g).abs() > T::tol(1e-9) {
                    return Err(Error::domain("minimizer vectors are not orthogonal"));
                }
            }
            set.push(h, f)?;
        }
        Ok(set)
    }

    pub(crate) fn push(&mut self, h: &Hypergraph<T>, f: Vec<T>) -> Result<()> {
        self.ratios.push(discrepancy_weighted(h, &f)?);
        self.vectors.push(f);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Largest |⟨f_i,f_j⟩_w − [i = j]|.
    pub fn orthonormality_error(&self, w: &[T]) -> T {
        let mut err = T::zero();
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { T::one() } else { T::zero() };
                err = err.max((wdot(w, a, b) - target).abs());
            }
        }
        err
    }

    /// CSV with one column per vector (`f1..fk`) and one row per vertex.
    pub fn write_vectors_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["vertex".to_string()];
        header.extend((1..=self.len()).map(|i| format!("f{i}")));
        wtr.write_record(&header)?;
        let n = self.vectors.first().map_or(0, Vec::len);
        for v in 0..n {
            let mut row = vec![v.to_string()];
            row.extend(self.vectors.iter().map(|f| f[v].to_string()));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// JSON metadata: ratios, method, seed and solver residuals.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.len(),
            "ratios": self.ratios.iter().map(|r| r.f64()).collect::<Vec<_>>(),
            "method": self.method,
            "seed": self.seed,
            "residuals": self.residuals.iter().map(|r| r.f64()).collect::<Vec<_>>(),
        })
    }
}

/// Removes from `f` its weighted projections on the (orthonormal) `basis` and normalizes.
/// Returns `None` if nothing is left.
pub(crate) fn orthonormalize_against<T: Scalar>(w: &[T], basis: &[Vec<T>], f: &[T]) -> Option<Vec<T>> {
    let mut g = f.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = wdot(w, &g, b);
            for (x, &y) in g.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let nf = wdot(w, &g, &g).sqrt();
    let scale = wdot(w, f, f).sqrt();
    if !(nf > T::tol(1e-12) * scale) {
        return None;
    }
    Some(g.into_iter().map(|x| x / nf).collect())
}
