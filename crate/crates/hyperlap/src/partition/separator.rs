use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::{dot, Scalar};

/// Random vertex sets from unit vectors: ℓ = max(1, ⌈log₂ τ⌉) Gaussian directions g_j, and
/// Ŝ = {u : ⟨ũ_u, g_j⟩ ≥ t for every j} with t calibrated so that Pr[u ∈ Ŝ] = α = 1/(2τ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalSeparator {
    beta: f64,
    tau: usize,
    alpha: f64,
    directions: usize,
    threshold: f64,
}

impl OrthogonalSeparator {
    pub fn new(beta: f64, tau: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(format!("β = {beta} must lie in (0, 1)")));
        }
        if tau < 2 {
            return Err(Error::domain(format!("τ = {tau} must be at least 2")));
        }
        let alpha = 1.0 / (2.0 * tau as f64);
        let directions = ((tau as f64).log2().ceil() as usize).max(1);
        let per_direction = alpha.powf(1.0 / directions as f64);
        let normal = Normal::standard();
        let threshold = normal.inverse_cdf(1.0 - per_direction);
        Ok(Self { beta, tau, alpha, directions, threshold })
    }

    /// Pr[u ∈ Ŝ].
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Number of Gaussian directions ℓ.
    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// α/τ, the pairwise inclusion target for vectors with ⟨ũ,ṽ⟩ ≤ β.
    pub fn pair_target(&self) -> f64 {
        self.alpha / self.tau as f64
    }

    /// ατ·log τ·log log τ·√log|e|·diam/√(1−β), with each logarithm floored at 1.
    pub fn cut_reference(&self, edge_size: usize, diameter: f64) -> f64 {
        let lg = |x: f64| x.ln().max(1.0);
        let t = self.tau as f64;
        self.alpha * t * lg(t) * lg(lg(t)) * lg(edge_size as f64).sqrt() * diameter / (1.0 - self.beta).sqrt()
    }

    /// Draws one set. `vectors` are assumed unit; see [`orthogonal_separator`] for the checked entry.
    pub fn sample<T: Scalar, R: Rng + ?Sized>(&self, vectors: &[Vec<T>], rng: &mut R) -> Vec<usize> {
        let dim = vectors.first().map_or(0, Vec::len);
        let t = T::of(self.threshold);
        let gs: Vec<Vec<T>> = (0..self.directions)
            .map(|_| (0..dim).map(|_| T::of(StandardNormal.sample(rng))).collect())
            .collect();
        (0..vectors.len()).filter(|&u| gs.iter().all(|g| dot(&vectors[u], g) >= t)).collect()
    }
}

pub(crate) fn check_unit<T: Scalar>(vectors: &[Vec<T>]) -> Result<()> {
    let dim = vectors.first().map_or(0, Vec::len);
    for (u, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::domain("separator vectors have mixed dimensions"));
        }
        let n = dot(v, v).sqrt();
        if !n.is_finite() || (n - T::one()).abs() > T::tol(1e-8) {
            return Err(Error::domain(format!("vector {u} has norm {n}, expected 1")));
        }
    }
    Ok(())
}

/// One orthogonal-separator sample over `vectors` (unit norm), seeded.
pub fn orthogonal_separator<T: Scalar>(vectors: &[Vec<T>], beta: f64, tau: usize, seed: u64) -> Result<Vec<usize>> {
    check_unit(vectors)?;
    let sep = OrthogonalSeparator::new(beta, tau)?;
    Ok(sep.sample(vectors, &mut stream_rng(seed, "separator", 0)))
}
