//! Dense complex-matrix engine: states, projections, unitaries,
//! effects, Born/Lüders/evolution rules, valuation functionals, and
//! tomographic reconstruction.

pub mod matrix;
pub mod ops;
pub mod space;
pub mod state;
pub mod tomography;
pub mod valuation;

pub use matrix::{CMatrix, CVector};
pub use ops::{born_probability, effect_expectation, evolve, luders_update};
pub use space::SectoredHilbertSpace;
pub use state::{
    DensityOperator, Effect, Projection, QuantumError, UnitaryMap, CONSTRUCTOR_TOL, EPS_PROB,
    PROPERTY_TOL, RECONSTRUCTION_TOL,
};
pub use tomography::{
    born_probabilities, canonical_family, reconstruct_canonical, reconstruct_state,
    redundant_family, Reconstructor,
};
pub use valuation::{valuation_to_probabilities, ValuationFunctional};
