//! State reconstruction from projection probabilities.
//!
//! A Hermitian matrix on `C^d` has `d²` real coordinates (diagonal,
//! real and imaginary parts of the upper triangle). A projection family
//! is informationally complete when its trace pairings span that space;
//! reconstruction is then a real linear solve. The general path is
//! least squares with a singular-value cutoff, robust to redundant
//! families. The canonical `d²`-member family also has a closed-form
//! dual, used where the linear solve would be wasteful.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use super::matrix::{basis_vector, hermitize, CMatrix};
use super::ops::born_probability;
use super::state::{DensityOperator, Projection, QuantumError, RECONSTRUCTION_TOL};
use crate::scalar::{imag_unit, real, Scalar};

/// Singular values at or below this are treated as zero.
pub const SINGULAR_VALUE_CUTOFF: f64 = 1e-10;

/// The canonical informationally complete family on `C^d`: the `d`
/// basis projections `|k⟩⟨k|`, and for each pair `j < k` the rank-one
/// projections onto `(e_j + e_k)/√2` and `(e_j + i e_k)/√2` — exactly
/// `d²` members, ordered (diagonal block first, then pairs in
/// lexicographic order, real before imaginary).
pub fn canonical_family<T: Scalar>(dim: usize) -> Vec<Projection<T>> {
    let mut family = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        family.push(Projection::rank_one(&basis_vector(dim, k)));
    }
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mut plus = basis_vector::<T>(dim, j);
            plus += basis_vector::<T>(dim, k);
            family.push(Projection::rank_one(&plus));
            let mut plus_i = basis_vector::<T>(dim, j);
            plus_i += basis_vector::<T>(dim, k) * imag_unit::<T>();
            family.push(Projection::rank_one(&plus_i));
        }
    }
    family
}

/// Overcomplete variant with both signs, `2d² − d` members. Only used
/// to exercise redundancy handling in the least-squares path.
pub fn redundant_family<T: Scalar>(dim: usize) -> Vec<Projection<T>> {
    let mut family = canonical_family(dim);
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mut minus = basis_vector::<T>(dim, j);
            minus -= basis_vector::<T>(dim, k);
            family.push(Projection::rank_one(&minus));
            let mut minus_i = basis_vector::<T>(dim, j);
            minus_i -= basis_vector::<T>(dim, k) * imag_unit::<T>();
            family.push(Projection::rank_one(&minus_i));
        }
    }
    family
}

/// Born probabilities of a state over a family.
pub fn born_probabilities<T: Scalar>(
    rho: &DensityOperator<T>,
    family: &[Projection<T>],
) -> Result<Vec<T>, QuantumError> {
    family.iter().map(|p| born_probability(rho, p)).collect()
}

fn hermitian_coords(dim: usize) -> usize {
    dim * dim
}

/// Trace-pairing row of a Hermitian operator against the coordinate
/// basis: `Tr(Fρ) = Σ_k F_kk ρ_kk + Σ_{j<k} 2(Re F_jk Re ρ_jk + Im F_jk Im ρ_jk)`.
fn pairing_row<T: Scalar>(f: &CMatrix<T>, dim: usize) -> Vec<T> {
    let two = real::<T>(2.0);
    let mut row = Vec::with_capacity(hermitian_coords(dim));
    for k in 0..dim {
        row.push(f[(k, k)].re);
    }
    for j in 0..dim {
        for k in (j + 1)..dim {
            row.push(two * f[(j, k)].re);
            row.push(two * f[(j, k)].im);
        }
    }
    row
}

fn matrix_from_coords<T: Scalar>(x: &DVector<T>, dim: usize) -> CMatrix<T> {
    let mut m = CMatrix::<T>::zeros(dim, dim);
    for k in 0..dim {
        m[(k, k)] = Complex::new(x[k], T::zero());
    }
    let mut idx = dim;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let re = x[idx];
            let im = x[idx + 1];
            idx += 2;
            m[(j, k)] = Complex::new(re, im);
            m[(k, j)] = Complex::new(re, -im);
        }
    }
    m
}

/// Precomputed least-squares solver for a fixed projection family.
pub struct Reconstructor<T: Scalar> {
    dim: usize,
    design: DMatrix<T>,
    svd: nalgebra::SVD<T, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<T: Scalar> Reconstructor<T> {
    /// Builds the design matrix and factorizes it once. Fails with
    /// `Underdetermined` when the family does not span the Hermitian
    /// space at the singular-value cutoff.
    pub fn new(family: &[Projection<T>], dim: usize) -> Result<Self, QuantumError> {
        let cols = hermitian_coords(dim);
        let rows = family.len();
        let mut design = DMatrix::<T>::zeros(rows, cols);
        for (i, p) in family.iter().enumerate() {
            if p.dim() != dim {
                return Err(QuantumError::DimensionMismatch(p.dim(), dim));
            }
            for (j, v) in pairing_row(p.matrix(), dim).into_iter().enumerate() {
                design[(i, j)] = v;
            }
        }
        let svd = design.clone().svd(true, true);
        let rank = svd.rank(real(SINGULAR_VALUE_CUTOFF));
        if rank < cols {
            return Err(QuantumError::Underdetermined { rank, needed: cols });
        }
        Ok(Self { dim, design, svd })
    }

    /// Least-squares reconstruction of the state behind `probabilities`.
    pub fn reconstruct(&self, probabilities: &[T]) -> Result<DensityOperator<T>, QuantumError> {
        if probabilities.len() != self.design.nrows() {
            return Err(QuantumError::DimensionMismatch(
                probabilities.len(),
                self.design.nrows(),
            ));
        }
        let b = DVector::<T>::from_iterator(probabilities.len(), probabilities.iter().copied());
        let x = self
            .svd
            .solve(&b, real(SINGULAR_VALUE_CUTOFF))
            .map_err(|e| QuantumError::Invalid(e.to_string()))?;
        // Residual check: probabilities must actually come from a state.
        let predicted = &self.design * &x;
        let mut residual = T::zero();
        for i in 0..b.len() {
            let r = (predicted[i] - b[i]).abs();
            if r > residual {
                residual = r;
            }
        }
        if residual > real(RECONSTRUCTION_TOL) {
            return Err(QuantumError::InconsistentProbabilities {
                residual: num_traits::ToPrimitive::to_f64(&residual).unwrap_or(f64::NAN),
            });
        }
        let m = hermitize(&matrix_from_coords(&x, self.dim));
        DensityOperator::with_tolerance(m, real(RECONSTRUCTION_TOL))
    }
}

/// One-shot least-squares reconstruction (factorize + solve).
pub fn reconstruct_state<T: Scalar>(
    family: &[Projection<T>],
    probabilities: &[T],
    dim: usize,
) -> Result<DensityOperator<T>, QuantumError> {
    Reconstructor::new(family, dim)?.reconstruct(probabilities)
}

/// Closed-form dual reconstruction for `canonical_family` probabilities,
/// in the member order that function produces.
pub fn reconstruct_canonical<T: Scalar>(
    probabilities: &[T],
    dim: usize,
) -> Result<DensityOperator<T>, QuantumError> {
    if probabilities.len() != dim * dim {
        return Err(QuantumError::DimensionMismatch(
            probabilities.len(),
            dim * dim,
        ));
    }
    let half = real::<T>(0.5);
    let mut m = CMatrix::<T>::zeros(dim, dim);
    for k in 0..dim {
        m[(k, k)] = Complex::new(probabilities[k], T::zero());
    }
    let mut idx = dim;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let mean = (probabilities[j] + probabilities[k]) * half;
            let re = probabilities[idx] - mean;
            let im = mean - probabilities[idx + 1];
            idx += 2;
            m[(j, k)] = Complex::new(re, im);
            m[(k, j)] = Complex::new(re, -im);
        }
    }
    DensityOperator::with_tolerance(m, real(RECONSTRUCTION_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::space::SectoredHilbertSpace;

    #[test]
    fn canonical_family_size_is_d_squared() {
        assert_eq!(canonical_family::<f64>(3).len(), 9);
        assert_eq!(canonical_family::<f64>(6).len(), 36);
        assert_eq!(redundant_family::<f64>(3).len(), 15);
    }

    #[test]
    fn maximally_mixed_round_trip_dim3() {
        let rho = DensityOperator::<f64>::maximally_mixed(3);
        let family = canonical_family(3);
        let probs = born_probabilities(&rho, &family).unwrap();
        let back = reconstruct_state(&family, &probs, 3).unwrap();
        assert!(rho.distance(&back) < 1e-12);
        let dual = reconstruct_canonical(&probs, 3).unwrap();
        assert!(rho.distance(&dual) < 1e-12);
    }

    #[test]
    fn sector_projections_alone_are_underdetermined() {
        let space = SectoredHilbertSpace::new(vec![1, 2, 3]);
        let family: Vec<Projection<f64>> = (0..3).map(|a| space.sector_projection(a)).collect();
        match Reconstructor::new(&family, 6) {
            Err(QuantumError::Underdetermined { rank, needed }) => {
                assert!(rank <= 3);
                assert_eq!(needed, 36);
            }
            other => panic!("expected underdetermined, got {:?}", other.err()),
        }
    }

    #[test]
    fn inconsistent_probabilities_are_reported() {
        // Overdetermined family with a corrupted entry: no Hermitian
        // matrix fits all pairings, so the residual must be flagged.
        let family = redundant_family::<f64>(2);
        let rho = DensityOperator::<f64>::maximally_mixed(2);
        let mut probs = born_probabilities(&rho, &family).unwrap();
        probs[2] += 0.1;
        match reconstruct_state(&family, &probs, 2) {
            Err(QuantumError::InconsistentProbabilities { residual }) => {
                assert!(residual > 1e-8)
            }
            other => panic!("expected inconsistency, got {:?}", other.err()),
        }
    }

    #[test]
    fn non_state_probabilities_fail_density_validation() {
        // Exactly solvable linear system whose solution has trace 2.
        let family = canonical_family::<f64>(2);
        let probs = vec![1.0, 1.0, 1.0, 1.0];
        assert!(matches!(
            reconstruct_state(&family, &probs, 2),
            Err(QuantumError::NotDensity(_))
        ));
    }
}
