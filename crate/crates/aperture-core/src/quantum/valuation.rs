//! Coherent valuation of the three primitive record outcomes.
//!
//! A valuation is determined by its values on the coordinate gambles
//! `e_1, e_2, e_3`; linearity is built into that representation, and
//! positivity/normalization are checked on construction. Any valuation
//! passing the checks is the expectation against a unique probability
//! vector.

use crate::scalar::{real, Scalar};

use super::state::QuantumError;

/// A linear valuation functional given by `(V(e_1), V(e_2), V(e_3))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationFunctional<T: Scalar> {
    values: [T; 3],
}

impl<T: Scalar> ValuationFunctional<T> {
    /// Validates positivity (V2) and normalization (V3); linearity (V1)
    /// is intrinsic to the coordinate representation.
    pub fn new(values: [T; 3]) -> Result<Self, QuantumError> {
        for (i, v) in values.iter().enumerate() {
            if *v < T::zero() {
                return Err(QuantumError::AxiomViolation {
                    axiom: "V2",
                    detail: format!("V(e_{}) = {} is negative", i + 1, v),
                });
            }
        }
        let sum = values[0] + values[1] + values[2];
        if (sum - T::one()).abs() > real(1e-12) {
            return Err(QuantumError::AxiomViolation {
                axiom: "V3",
                detail: format!("V(1) = {} is not 1", sum),
            });
        }
        Ok(Self { values })
    }

    /// The represented probability vector `p_α = V(e_α)`.
    pub fn probabilities(&self) -> [T; 3] {
        self.values
    }

    /// Expectation `V(f) = Σ_α p_α f(α)` of a gamble.
    pub fn expectation(&self, gamble: [T; 3]) -> T {
        self.values[0] * gamble[0] + self.values[1] * gamble[1] + self.values[2] * gamble[2]
    }
}

/// Probability vector of a validated valuation.
pub fn valuation_to_probabilities<T: Scalar>(values: [T; 3]) -> Result<[T; 3], QuantumError> {
    Ok(ValuationFunctional::new(values)?.probabilities())
}
