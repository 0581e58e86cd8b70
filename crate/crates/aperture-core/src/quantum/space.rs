//! Finite complex Hilbert space with an ordered sector partition.

use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use super::state::Projection;
use crate::scalar::Scalar;
use num_complex::Complex;

/// A finite-dimensional space split into ordered sector subspaces. The
/// sector projections are diagonal 0/1 blocks: mutually orthogonal and
/// summing to the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectoredHilbertSpace {
    sector_dims: Vec<usize>,
}

impl SectoredHilbertSpace {
    /// Panics if any sector is empty or no sector is given.
    pub fn new(sector_dims: Vec<usize>) -> Self {
        assert!(!sector_dims.is_empty(), "need at least one sector");
        assert!(
            sector_dims.iter().all(|&d| d >= 1),
            "sectors must be nonempty"
        );
        Self { sector_dims }
    }

    pub fn total_dim(&self) -> usize {
        self.sector_dims.iter().sum()
    }

    pub fn num_sectors(&self) -> usize {
        self.sector_dims.len()
    }

    pub fn sector_dims(&self) -> &[usize] {
        &self.sector_dims
    }

    pub fn sector_dim(&self, alpha: usize) -> usize {
        self.sector_dims[alpha]
    }

    /// Index range of sector `alpha` in the ambient space.
    pub fn sector_range(&self, alpha: usize) -> std::ops::Range<usize> {
        let start: usize = self.sector_dims[..alpha].iter().sum();
        start..start + self.sector_dims[alpha]
    }

    /// The diagonal block projection `P_α`.
    pub fn sector_projection<T: Scalar>(&self, alpha: usize) -> Projection<T> {
        let mut m = CMatrix::<T>::zeros(self.total_dim(), self.total_dim());
        for i in self.sector_range(alpha) {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        Projection::trusted(m)
    }

    /// Sum of the sector projections over `sectors` (deduplicated).
    pub fn subset_projection<T: Scalar>(&self, sectors: &[usize]) -> Projection<T> {
        let mut m = CMatrix::<T>::zeros(self.total_dim(), self.total_dim());
        let mut seen = vec![false; self.num_sectors()];
        for &alpha in sectors {
            if seen[alpha] {
                continue;
            }
            seen[alpha] = true;
            for i in self.sector_range(alpha) {
                m[(i, i)] = Complex::new(T::one(), T::zero());
            }
        }
        Projection::trusted(m)
    }
}
