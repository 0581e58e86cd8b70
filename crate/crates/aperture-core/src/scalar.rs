//! Scalar abstraction for the dense-matrix engine.
//!
//! Everything matrix-valued in this crate is generic over a real scalar
//! `T` (`f32` or `f64`); complex entries are `num_complex::Complex<T>`.
//! The exact integer/rational arithmetic of the balance search does not
//! go through this trait — Diophantine checks never touch floats.

use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable as the base field of the matrix engine.
///
/// Deliberately not bounded on `num_traits::Float`: `RealField` already
/// provides the math methods, and carrying both would make every
/// `x.sqrt()` ambiguous in generic code.
pub trait Scalar:
    nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + Default + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Convert an `f64` literal (tolerances, constants) into `T`.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must convert into the scalar type")
}

/// Complex number from real/imaginary `f64` literals.
#[inline]
pub fn complex<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// `i` in the scalar's complex field.
#[inline]
pub fn imag_unit<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}
