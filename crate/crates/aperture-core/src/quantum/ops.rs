//! Born probabilities, Lüders conditioning, unitary evolution.

use super::matrix::{dagger, trace_product_re};
use super::state::{DensityOperator, Effect, Projection, QuantumError, UnitaryMap, EPS_PROB};
use crate::scalar::{real, Scalar};

/// `p(P) = Tr(ρP)`, clamped to `[0, 1]` on output.
pub fn born_probability<T: Scalar>(
    rho: &DensityOperator<T>,
    p: &Projection<T>,
) -> Result<T, QuantumError> {
    if rho.dim() != p.dim() {
        return Err(QuantumError::DimensionMismatch(rho.dim(), p.dim()));
    }
    let raw = trace_product_re(rho.matrix(), p.matrix());
    Ok(raw.max(T::zero()).min(T::one()))
}

/// `p(E) = Tr(ρE)` for an effect, clamped to `[0, 1]`.
pub fn effect_expectation<T: Scalar>(
    rho: &DensityOperator<T>,
    e: &Effect<T>,
) -> Result<T, QuantumError> {
    if rho.dim() != e.dim() {
        return Err(QuantumError::DimensionMismatch(rho.dim(), e.dim()));
    }
    let raw = trace_product_re(rho.matrix(), e.matrix());
    Ok(raw.max(T::zero()).min(T::one()))
}

/// Conditioning on a recorded event: `ρ ↦ PρP / Tr(ρP)`.
///
/// Branches with probability at or below `EPS_PROB` are impossible and
/// produce `ZeroProbabilityBranch`.
pub fn luders_update<T: Scalar>(
    rho: &DensityOperator<T>,
    p: &Projection<T>,
) -> Result<DensityOperator<T>, QuantumError> {
    if rho.dim() != p.dim() {
        return Err(QuantumError::DimensionMismatch(rho.dim(), p.dim()));
    }
    let prob = trace_product_re(rho.matrix(), p.matrix());
    if prob <= real(EPS_PROB) {
        return Err(QuantumError::ZeroProbabilityBranch {
            p: num_traits::ToPrimitive::to_f64(&prob).unwrap_or(0.0),
        });
    }
    let conditioned =
        (p.matrix() * rho.matrix() * p.matrix()) / num_complex::Complex::new(prob, T::zero());
    Ok(DensityOperator::trusted(conditioned))
}

/// Epistemic evolution `ρ ↦ UρU†`.
pub fn evolve<T: Scalar>(
    rho: &DensityOperator<T>,
    u: &UnitaryMap<T>,
) -> Result<DensityOperator<T>, QuantumError> {
    if rho.dim() != u.dim() {
        return Err(QuantumError::DimensionMismatch(rho.dim(), u.dim()));
    }
    Ok(DensityOperator::trusted(
        u.matrix() * rho.matrix() * dagger(u.matrix()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::matrix::{basis_vector, CVector};
    use crate::quantum::space::SectoredHilbertSpace;
    use crate::scalar::complex;

    fn space123() -> SectoredHilbertSpace {
        SectoredHilbertSpace::new(vec![1, 2, 3])
    }

    #[test]
    fn born_on_sector_of_maximally_mixed() {
        let rho = DensityOperator::<f64>::maximally_mixed(6);
        let p2 = space123().sector_projection::<f64>(1);
        let got = born_probability(&rho, &p2).unwrap();
        assert!((got - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn born_on_pure_state_in_own_sector() {
        let rho = DensityOperator::<f64>::pure_basis(6, 0);
        let p1 = space123().sector_projection::<f64>(0);
        assert!((born_probability(&rho, &p1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn born_on_half_half_diagonal() {
        let rho = DensityOperator::<f64>::diagonal(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let p1 = space123().sector_projection::<f64>(0);
        assert!((born_probability(&rho, &p1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn luders_of_maximally_mixed_is_sector_mixed() {
        let rho = DensityOperator::<f64>::maximally_mixed(6);
        let p2 = space123().sector_projection::<f64>(1);
        let post = luders_update(&rho, &p2).unwrap();
        let expected = (p2.matrix() * complex::<f64>(0.5, 0.0)).clone();
        assert!(crate::quantum::matrix::frob_dist(post.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn luders_on_orthogonal_support_is_an_error() {
        let rho = DensityOperator::<f64>::pure_basis(6, 0);
        let p2 = space123().sector_projection::<f64>(1);
        assert!(matches!(
            luders_update(&rho, &p2),
            Err(QuantumError::ZeroProbabilityBranch { .. })
        ));
    }

    #[test]
    fn luders_collapses_superposition_across_sectors() {
        // ψ = (e2 + e4)/√2 (1-indexed), P spans {e2, e3}.
        let mut psi = CVector::<f64>::zeros(6);
        psi[1] = complex(1.0, 0.0);
        psi[3] = complex(1.0, 0.0);
        let rho = DensityOperator::pure(&psi);
        let p2 = space123().sector_projection::<f64>(1);
        let post = luders_update(&rho, &p2).unwrap();
        let expected = DensityOperator::<f64>::pure(&basis_vector(6, 1));
        assert!(post.distance(&expected) < 1e-14);
    }

    #[test]
    fn evolve_examples() {
        let rho = DensityOperator::<f64>::pure_basis(4, 0);
        let id = UnitaryMap::<f64>::identity(4);
        assert!(evolve(&rho, &id).unwrap().distance(&rho) < 1e-15);

        let mixed = DensityOperator::<f64>::maximally_mixed(4);
        let swap = UnitaryMap::<f64>::permutation(&[1, 0, 2, 3]);
        assert!(evolve(&mixed, &swap).unwrap().distance(&mixed) < 1e-15);

        let moved = evolve(&rho, &swap).unwrap();
        let expected = DensityOperator::<f64>::pure_basis(4, 1);
        assert!(moved.distance(&expected) < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = DensityOperator::<f64>::maximally_mixed(4);
        let p = Projection::<f64>::identity(6);
        assert!(matches!(
            born_probability(&rho, &p),
            Err(QuantumError::DimensionMismatch(4, 6))
        ));
    }
}
