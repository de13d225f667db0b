use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The three isomorphic coordinate systems for functions on vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// `f`, with inner product `⟨f,g⟩_w = fᵀWg`.
    Weighted,
    /// `x = W^{1/2} f`, with the standard inner product.
    Normalized,
    /// `φ = W f`, the measure on vertices.
    Measure,
}

/// A vector over vertices tagged with the space it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceVector<T> {
    values: Vec<T>,
    space: Space,
}

impl<T: Scalar> SpaceVector<T> {
    pub fn new(values: Vec<T>, space: Space) -> Self {
        Self { values, space }
    }

    pub fn weighted(values: Vec<T>) -> Self {
        Self::new(values, Space::Weighted)
    }

    pub fn normalized(values: Vec<T>) -> Self {
        Self::new(values, Space::Normalized)
    }

    pub fn measure(values: Vec<T>) -> Self {
        Self::new(values, Space::Measure)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Converts to `target` using vertex weights `w`.
    pub fn to_space(&self, target: Space, w: &[T]) -> SpaceVector<T> {
        assert_eq!(w.len(), self.values.len(), "weight vector length mismatch");
        if target == self.space {
            return self.clone();
        }
        // exponent of W that maps `from` into weighted space: f = W^{-e} v
        let power = |s: Space| match s {
            Space::Weighted => 0.0,
            Space::Normalized => 0.5,
            Space::Measure => 1.0,
        };
        let p = power(target) - power(self.space);
        let values = self
            .values
            .iter()
            .zip(w)
            .map(|(&v, &wu)| {
                if p == 0.5 {
                    v * wu.sqrt()
                } else if p == -0.5 {
                    v / wu.sqrt()
                } else if p == 1.0 {
                    v * wu
                } else {
                    v / wu
                }
            })
            .collect();
        SpaceVector { values, space: target }
    }

    /// Weighted-space coordinates `f`.
    pub fn weighted_values(&self, w: &[T]) -> Vec<T> {
        self.to_space(Space::Weighted, w).values
    }

    /// Inner product in the geometry of the shared space. Measure vectors are compared through
    /// their weighted images.
    pub fn inner(&self, other: &SpaceVector<T>, w: &[T]) -> Result<T> {
        if self.space != other.space {
            return Err(Error::domain(format!(
                "inner product across spaces {:?} and {:?}",
                self.space, other.space
            )));
        }
        let (a, b) = match self.space {
            Space::Normalized => (self.values.clone(), other.values.clone()),
            _ => {
                let a = self.weighted_values(w);
                let b = other.weighted_values(w);
                (a.iter().zip(w).map(|(&x, &wu)| x * wu.sqrt()).collect(),
                 b.iter().zip(w).map(|(&x, &wu)| x * wu.sqrt()).collect())
            }
        };
        Ok(crate::scalar::dot(&a, &b))
    }

    /// `self + alpha * other`, refusing to mix spaces.
    pub fn axpy(&self, alpha: T, other: &SpaceVector<T>) -> Result<SpaceVector<T>> {
        if self.space != other.space || self.len() != other.len() {
            return Err(Error::domain("vector arithmetic across spaces or lengths"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + alpha * b).collect();
        Ok(SpaceVector { values, space: self.space })
    }

    pub fn scale(&self, alpha: T) -> SpaceVector<T> {
        SpaceVector { values: self.values.iter().map(|&a| a * alpha).collect(), space: self.space }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}
