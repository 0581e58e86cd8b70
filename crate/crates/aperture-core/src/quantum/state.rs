//! Validated operator types: densities, projections, unitaries, effects.
//!
//! Constructors enforce the algebraic invariants at the constructor
//! tolerance; internal code paths that produce provably valid matrices
//! use the crate-private `trusted` constructors.

use num_complex::Complex;
use thiserror::Error;

use super::matrix::{
    basis_vector, dagger, frob_dist, hermitian_eigenvalues, hermitize, is_hermitian, normalize,
    outer, trace_re, CMatrix, CVector,
};
use crate::scalar::{real, Scalar};

/// Constructor validation tolerance.
pub const CONSTRUCTOR_TOL: f64 = 1e-10;
/// Tolerance for derived-property assertions (one layer of composition).
pub const PROPERTY_TOL: f64 = 1e-9;
/// Tomographic reconstruction tolerance (two layers).
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Conditioning probabilities at or below this are treated as zero.
pub const EPS_PROB: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("operator dimensions do not match: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("matrix is not a projection within tolerance")]
    NotProjection,
    #[error("matrix is not unitary within tolerance")]
    NotUnitary,
    #[error("matrix is not a valid density operator: {0}")]
    NotDensity(String),
    #[error("effect spectrum escapes [0, 1] within tolerance")]
    NotEffect,
    #[error("conditioning on a zero-probability branch (p = {p})")]
    ZeroProbabilityBranch { p: f64 },
    #[error("valuation axiom {axiom} violated: {detail}")]
    AxiomViolation { axiom: &'static str, detail: String },
    #[error("projection family is underdetermined: rank {rank} < {needed}")]
    Underdetermined { rank: usize, needed: usize },
    #[error("probabilities are inconsistent with any state (residual {residual:e})")]
    InconsistentProbabilities { residual: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// An epistemic state: Hermitian, positive semidefinite (to tolerance),
/// unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Scalar> {
    mat: CMatrix<T>,
}

impl<T: Scalar> DensityOperator<T> {
    pub fn new(mat: CMatrix<T>) -> Result<Self, QuantumError> {
        Self::with_tolerance(mat, real(CONSTRUCTOR_TOL))
    }

    pub fn with_tolerance(mat: CMatrix<T>, tol: T) -> Result<Self, QuantumError> {
        if !mat.is_square() {
            return Err(QuantumError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        if !is_hermitian(&mat, tol) {
            return Err(QuantumError::NotHermitian);
        }
        // Symmetrize before the spectral checks to strip rounding drift.
        let mat = hermitize(&mat);
        let trace = trace_re(&mat);
        if (trace - T::one()).abs() > tol {
            return Err(QuantumError::NotDensity(format!(
                "trace {} is not 1",
                trace
            )));
        }
        let min = hermitian_eigenvalues(&mat)
            .into_iter()
            .next()
            .expect("nonempty spectrum");
        if min < -tol {
            return Err(QuantumError::NotDensity(format!(
                "negative eigenvalue {}",
                min
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn trusted(mat: CMatrix<T>) -> Self {
        Self { mat }
    }

    /// Pure state `|ψ⟩⟨ψ|` from a (not necessarily normalized) vector.
    pub fn pure(psi: &CVector<T>) -> Self {
        Self {
            mat: outer(&normalize(psi)),
        }
    }

    /// Pure state on the standard basis vector `k`.
    pub fn pure_basis(dim: usize, k: usize) -> Self {
        Self::pure(&basis_vector(dim, k))
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = Complex::new(T::one() / real::<T>(dim as f64), T::zero());
        Self {
            mat: CMatrix::<T>::identity(dim, dim) * w,
        }
    }

    /// Diagonal state from nonnegative weights summing to one.
    pub fn diagonal(weights: &[T]) -> Result<Self, QuantumError> {
        let d = weights.len();
        let mut m = CMatrix::<T>::zeros(d, d);
        for (i, &w) in weights.iter().enumerate() {
            m[(i, i)] = Complex::new(w, T::zero());
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn distance(&self, other: &Self) -> T {
        frob_dist(&self.mat, &other.mat)
    }
}

/// An orthogonal projection: idempotent and Hermitian to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Scalar> {
    mat: CMatrix<T>,
}

impl<T: Scalar> Projection<T> {
    pub fn new(mat: CMatrix<T>) -> Result<Self, QuantumError> {
        Self::with_tolerance(mat, real(CONSTRUCTOR_TOL))
    }

    pub fn with_tolerance(mat: CMatrix<T>, tol: T) -> Result<Self, QuantumError> {
        if !mat.is_square() {
            return Err(QuantumError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        if frob_dist(&mat, &dagger(&mat)) > tol {
            return Err(QuantumError::NotProjection);
        }
        if frob_dist(&(&mat * &mat), &mat) > tol {
            return Err(QuantumError::NotProjection);
        }
        Ok(Self { mat })
    }

    pub(crate) fn trusted(mat: CMatrix<T>) -> Self {
        Self { mat }
    }

    /// Rank-one projection onto the line spanned by `psi`.
    pub fn rank_one(psi: &CVector<T>) -> Self {
        Self {
            mat: outer(&normalize(psi)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::<T>::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Trace of a projection is its rank; rounded to the nearest integer.
    pub fn rank(&self) -> usize {
        let t: f64 = num_traits::ToPrimitive::to_f64(&trace_re(&self.mat)).unwrap_or(0.0);
        t.round() as usize
    }
}

/// A unitary map: `‖U†U − I‖_F` within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap<T: Scalar> {
    mat: CMatrix<T>,
}

impl<T: Scalar> UnitaryMap<T> {
    pub fn new(mat: CMatrix<T>) -> Result<Self, QuantumError> {
        Self::with_tolerance(mat, real(CONSTRUCTOR_TOL))
    }

    pub fn with_tolerance(mat: CMatrix<T>, tol: T) -> Result<Self, QuantumError> {
        if !mat.is_square() {
            return Err(QuantumError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        let gram = dagger(&mat) * &mat;
        if frob_dist(&gram, &CMatrix::<T>::identity(mat.nrows(), mat.ncols())) > tol {
            return Err(QuantumError::NotUnitary);
        }
        Ok(Self { mat })
    }

    pub(crate) fn trusted(mat: CMatrix<T>) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::<T>::identity(dim, dim),
        }
    }

    /// Permutation unitary sending basis vector `k` to `perm[k]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let d = perm.len();
        let mut m = CMatrix::<T>::zeros(d, d);
        for (k, &dest) in perm.iter().enumerate() {
            m[(dest, k)] = Complex::new(T::one(), T::zero());
        }
        Self { mat: m }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}

/// An effect: Hermitian with spectrum inside `[0, 1]` to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect<T: Scalar> {
    mat: CMatrix<T>,
}

impl<T: Scalar> Effect<T> {
    pub fn new(mat: CMatrix<T>) -> Result<Self, QuantumError> {
        Self::with_tolerance(mat, real(CONSTRUCTOR_TOL))
    }

    pub fn with_tolerance(mat: CMatrix<T>, tol: T) -> Result<Self, QuantumError> {
        if !mat.is_square() {
            return Err(QuantumError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        if !is_hermitian(&mat, tol) {
            return Err(QuantumError::NotHermitian);
        }
        let mat = hermitize(&mat);
        let eigs = hermitian_eigenvalues(&mat);
        let lo = eigs.first().copied().unwrap_or_else(T::zero);
        let hi = eigs.last().copied().unwrap_or_else(T::zero);
        if lo < -tol || hi > T::one() + tol {
            return Err(QuantumError::NotEffect);
        }
        Ok(Self { mat })
    }

    pub(crate) fn trusted(mat: CMatrix<T>) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn spectrum(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.mat)
    }
}

impl<T: Scalar> From<Projection<T>> for Effect<T> {
    fn from(p: Projection<T>) -> Self {
        Effect { mat: p.mat }
    }
}

/// Sanity measure used in a few tests: how far a matrix is from unitary.
pub fn unitarity_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    let gram = dagger(m) * m;
    frob_dist(&gram, &CMatrix::<T>::identity(m.nrows(), m.ncols()))
}

/// Largest absolute entry, used for quick zero checks in tests.
pub fn max_abs_entry<T: Scalar>(m: &CMatrix<T>) -> T {
    let mut best = T::zero();
    for z in m.iter() {
        let a = z.norm_sqr().sqrt();
        if a > best {
            best = a;
        }
    }
    best
}
