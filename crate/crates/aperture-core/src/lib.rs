//! Desk-scale verification toolkit for the accessibility-balance
//! selection principle and the Aperture record formalism built on it.
//!
//! The crate has two arithmetic regimes:
//!
//! * exact integer/rational arithmetic for the algebra profiles, the
//!   Diophantine balance search, and the boundary reduction chain;
//! * a dense complex-matrix engine, generic over the real scalar
//!   ([`scalar::Scalar`], `f32` or `f64`), for states, records,
//!   tomography, and Bell-sector checks.
//!
//! Concrete `f64` aliases for the engine types live at the crate root;
//! all shipped tooling runs on `f64`.

pub mod algebra;
pub mod bell;
pub mod boundary;
pub mod checks;
pub mod exchange;
pub mod quantum;
pub mod random;
pub mod record;
pub mod scalar;
pub mod search;

pub use scalar::Scalar;

/// Default real scalar for the shipped tooling.
pub type Real = f64;

pub type Complex64 = num_complex::Complex<f64>;
pub type Density64 = quantum::DensityOperator<f64>;
pub type Projection64 = quantum::Projection<f64>;
pub type Unitary64 = quantum::UnitaryMap<f64>;
pub type Effect64 = quantum::Effect<f64>;
pub type Valuation64 = quantum::ValuationFunctional<f64>;
pub type KrausChannel64 = bell::KrausChannel<f64>;
pub type MeasurementSetting64 = bell::MeasurementSetting<f64>;
pub type InstrumentConfig64 = record::InstrumentConfig<f64>;
pub type JointDistribution64 = record::JointDistribution<f64>;
