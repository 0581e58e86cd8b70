//! Small dense complex-matrix helpers shared across the engine.
//!
//! Everything operates on `DMatrix<Complex<T>>`; nalgebra supplies the
//! factorizations (QR, Hermitian eigen, SVD) behind these wrappers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::scalar::Scalar;

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Conjugate transpose.
pub fn dagger<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// Frobenius norm, as a real scalar.
pub fn frob_norm<T: Scalar>(m: &CMatrix<T>) -> T {
    let mut acc = T::zero();
    for z in m.iter() {
        acc += z.norm_sqr();
    }
    acc.sqrt()
}

/// Frobenius distance `‖a − b‖_F`.
pub fn frob_dist<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    frob_norm(&(a - b))
}

/// Real part of the trace.
pub fn trace_re<T: Scalar>(m: &CMatrix<T>) -> T {
    let mut acc = T::zero();
    for i in 0..m.nrows().min(m.ncols()) {
        acc += m[(i, i)].re;
    }
    acc
}

/// `Re Tr(a·b)` without forming the product: `Σ_{i,k} Re(a_ik b_ki)`.
pub fn trace_product_re<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = T::zero();
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// `Re ⟨v|m|v⟩` — expectation of a Hermitian operator in a pure state.
pub fn quadratic_form_re<T: Scalar>(m: &CMatrix<T>, v: &CVector<T>) -> T {
    let mv = m * v;
    let mut acc = T::zero();
    for i in 0..v.len() {
        let z = v[i].conj() * mv[i];
        acc += z.re;
    }
    acc
}

/// `‖m − m†‖_F ≤ tol`.
pub fn is_hermitian<T: Scalar>(m: &CMatrix<T>, tol: T) -> bool {
    m.is_square() && frob_dist(m, &dagger(m)) <= tol
}

/// `(m + m†)/2` — removes accumulated anti-Hermitian drift.
pub fn hermitize<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = Complex::new(crate::scalar::real::<T>(0.5), T::zero());
    (m + dagger(m)) * half
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut vals: Vec<T> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are ordered reals"));
    vals
}

/// Outer product `|v⟩⟨v|`.
pub fn outer<T: Scalar>(v: &CVector<T>) -> CMatrix<T> {
    v * v.adjoint()
}

/// Normalizes a vector; panics on the zero vector.
pub fn normalize<T: Scalar>(v: &CVector<T>) -> CVector<T> {
    let n = v.norm();
    assert!(n > T::zero(), "cannot normalize the zero vector");
    v / Complex::new(n, T::zero())
}

/// Standard basis vector `e_k` in dimension `dim`.
pub fn basis_vector<T: Scalar>(dim: usize, k: usize) -> CVector<T> {
    let mut v = CVector::zeros(dim);
    v[k] = Complex::new(T::one(), T::zero());
    v
}

/// Kronecker product.
pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

/// Partial trace over the first tensor factor of `C^{da} ⊗ C^{db}`.
pub fn partial_trace_first<T: Scalar>(m: &CMatrix<T>, da: usize, db: usize) -> CMatrix<T> {
    assert_eq!(m.nrows(), da * db);
    assert_eq!(m.ncols(), da * db);
    let mut out = CMatrix::<T>::zeros(db, db);
    for b in 0..db {
        for bp in 0..db {
            let mut acc = Complex::new(T::zero(), T::zero());
            for a in 0..da {
                acc += m[(a * db + b, a * db + bp)];
            }
            out[(b, bp)] = acc;
        }
    }
    out
}

/// Partial trace over the second tensor factor of `C^{da} ⊗ C^{db}`.
pub fn partial_trace_second<T: Scalar>(m: &CMatrix<T>, da: usize, db: usize) -> CMatrix<T> {
    assert_eq!(m.nrows(), da * db);
    assert_eq!(m.ncols(), da * db);
    let mut out = CMatrix::<T>::zeros(da, da);
    for a in 0..da {
        for ap in 0..da {
            let mut acc = Complex::new(T::zero(), T::zero());
            for b in 0..db {
                acc += m[(a * db + b, ap * db + b)];
            }
            out[(a, ap)] = acc;
        }
    }
    out
}
