//! Complex envelope, boundary center, boundary balance, and the
//! context-free record verifier.
//!
//! The complex envelope of a candidate algebra maps each summand to a
//! full complex matrix block (quaternionic factors double their block
//! size). Its center has one projection per block; the boundary algebra
//! is that center. A record observable is context-free when it commutes
//! with every sector-wise unitary; the verifier checks invariance
//! numerically and hunts counterexamples for everything else.

use num_integer::Roots;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{disc_accessibility, CandidateAlgebra, DivisionRing};
use crate::quantum::matrix::{dagger, frob_dist, CMatrix};
use crate::quantum::space::SectoredHilbertSpace;
use crate::quantum::state::{Projection, UnitaryMap};
use crate::random::{derive_seed, rng_from, sector_unitary};
use crate::scalar::{real, Scalar};
use num_complex::Complex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("K_b·R_b·2^n_b = {product} is not a perfect square: no balanced boundary")]
    NoBalancedBoundary { product: u64 },
    #[error("bulk disc {disc} is not divisible by K {k}")]
    UnbalancedBulk { disc: u64, k: u64 },
    #[error("trial count must be at least 1")]
    NoTrials,
}

/// A finite direct sum of full complex matrix blocks, sizes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexAlgebra {
    blocks: Vec<u32>,
}

impl ComplexAlgebra {
    pub fn new(mut blocks: Vec<u32>) -> Self {
        assert!(!blocks.is_empty() && blocks.iter().all(|&b| b >= 1));
        blocks.sort_unstable();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    /// Total complex representation dimension `Σ n_i`.
    pub fn rep_dim(&self) -> u64 {
        self.blocks.iter().map(|&b| b as u64).sum()
    }

    /// The sectored Hilbert space carrying one sector per block.
    pub fn sectored_space(&self) -> SectoredHilbertSpace {
        SectoredHilbertSpace::new(self.blocks.iter().map(|&b| b as usize).collect())
    }
}

/// Complex envelope of a candidate algebra: `M_m(R) → M_m(C)`,
/// `M_m(C) → M_m(C)`, `M_m(H) → M_{2m}(C)`.
pub fn complex_envelope(algebra: &CandidateAlgebra) -> ComplexAlgebra {
    let blocks = algebra
        .factors()
        .iter()
        .map(|f| match f.ring {
            DivisionRing::R | DivisionRing::C => f.matrix_dim,
            DivisionRing::H => 2 * f.matrix_dim,
        })
        .collect();
    ComplexAlgebra::new(blocks)
}

/// Center data of a complex block algebra: one minimal central
/// projection per block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterInfo {
    pub central_projections: usize,
    /// Real dimension of the center, `2 ·` (number of blocks).
    pub k_b: u64,
    /// Representational complexity of the center, one per block.
    pub r_b: u64,
    pub block_dims: Vec<u32>,
}

pub fn center(env: &ComplexAlgebra) -> CenterInfo {
    let n = env.blocks().len();
    CenterInfo {
        central_projections: n,
        k_b: 2 * n as u64,
        r_b: n as u64,
        block_dims: env.blocks().to_vec(),
    }
}

/// Boundary balance data for a sector with parameters `(K_b, R_b, n_b)`
/// against a bulk of Hilbert dimension `H_bulk`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub k_b: u64,
    pub r_b: u64,
    pub n_b: u32,
    pub h_b: u64,
    /// Trace reduction ratio `H_b / H_bulk`.
    pub xi: Rational64,
    /// `disc_b / K_b = R_b` for a balanced boundary sector.
    pub resolution_boundary: u64,
}

/// Solves `H_b² = K_b·R_b·2^{n_b}`; errors when the product is not a
/// perfect square (no balanced boundary exists).
pub fn boundary_profile(
    k_b: u64,
    r_b: u64,
    n_b: u32,
    h_bulk: u64,
) -> Result<BoundaryProfile, BoundaryError> {
    assert!(n_b <= 40, "boundary dimension out of supported range");
    let product = k_b * r_b * (1u64 << n_b);
    let h_b = product.sqrt();
    if h_b * h_b != product {
        return Err(BoundaryError::NoBalancedBoundary { product });
    }
    Ok(BoundaryProfile {
        k_b,
        r_b,
        n_b,
        h_b,
        xi: Rational64::new(h_b as i64, h_bulk as i64),
        resolution_boundary: r_b,
    })
}

/// The whole reduction for one bulk algebra: envelope, center, balanced
/// boundary, and the bulk/boundary resolution ratios.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryChain {
    pub envelope: ComplexAlgebra,
    pub center: CenterInfo,
    pub profile: BoundaryProfile,
    /// Bulk resolution ratio `disc / K` (exact integer division).
    pub resolution_bulk: u64,
}

pub fn boundary_chain(
    algebra: &CandidateAlgebra,
    n_bulk: u32,
    h_bulk: u64,
) -> Result<BoundaryChain, BoundaryError> {
    let envelope = complex_envelope(algebra);
    let info = center(&envelope);
    let profile = boundary_profile(info.k_b, info.r_b, n_bulk - 1, h_bulk)?;
    let bulk = algebra.profile();
    let disc = disc_accessibility(&bulk);
    if !disc.is_multiple_of(bulk.k) {
        return Err(BoundaryError::UnbalancedBulk { disc, k: bulk.k });
    }
    Ok(BoundaryChain {
        envelope,
        center: info,
        profile,
        resolution_bulk: disc / bulk.k,
    })
}

/// Outcome of a context-freeness trial run.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextFreeVerdict<T: Scalar> {
    /// No sampled sector-wise unitary moved the projection.
    Invariant { trials: usize, max_deviation: T },
    /// A sector-wise unitary with `‖UQU† − Q‖_F > tol`.
    Counterexample {
        unitary: UnitaryMap<T>,
        deviation: T,
        trial: usize,
    },
}

/// Deterministic phase family: `e^{iθ}` on one sector, identity
/// elsewhere, for θ ∈ {π/2, π}. These kill cross-sector blocks.
fn phase_family<T: Scalar>(space: &SectoredHilbertSpace) -> Vec<UnitaryMap<T>> {
    let mut out = Vec::new();
    for alpha in 0..space.num_sectors() {
        for theta in [real::<T>(std::f64::consts::FRAC_PI_2), T::pi()] {
            let mut m = CMatrix::<T>::identity(space.total_dim(), space.total_dim());
            let phase = Complex::new(theta.cos(), theta.sin());
            for i in space.sector_range(alpha) {
                m[(i, i)] = phase;
            }
            out.push(UnitaryMap::trusted(m));
        }
    }
    out
}

/// Checks whether `q` is invariant under sector-wise unitaries.
///
/// Trials run the deterministic phase family first, then seeded Haar
/// sector-wise unitaries; the first trial exceeding `tol` is returned
/// as a counterexample.
pub fn verify_context_free<T: Scalar>(
    q: &Projection<T>,
    space: &SectoredHilbertSpace,
    trials: usize,
    seed: u64,
    tol: T,
) -> Result<ContextFreeVerdict<T>, BoundaryError> {
    if trials == 0 {
        return Err(BoundaryError::NoTrials);
    }
    let deterministic = phase_family::<T>(space);
    let mut max_deviation = T::zero();
    for trial in 0..trials {
        let u = if trial < deterministic.len() {
            deterministic[trial].clone()
        } else {
            let mut rng = rng_from(derive_seed(seed, trial as u64));
            sector_unitary(space, &mut rng)
        };
        let moved = u.matrix() * q.matrix() * dagger(u.matrix());
        let deviation = frob_dist(&moved, q.matrix());
        if deviation > tol {
            return Ok(ContextFreeVerdict::Counterexample {
                unitary: u,
                deviation,
                trial,
            });
        }
        if deviation > max_deviation {
            max_deviation = deviation;
        }
    }
    Ok(ContextFreeVerdict::Invariant {
        trials,
        max_deviation,
    })
}
