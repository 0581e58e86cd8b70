//! Simple real *-algebra factors and their accessibility measures.
//!
//! A candidate algebra is a finite direct sum of factors `M_m(Δ)` with
//! `Δ ∈ {R, C, H}`. Each factor contributes four structural integers:
//!
//! * `K` — real dimension of the factor,
//! * `R` — complex dimension of its minimal faithful *-representation,
//! * `G` — dimension of the non-abelian (semi-simple) part of the
//!   unitary gauge algebra,
//! * `A` — number of abelian `u(1)` summands of that gauge algebra.
//!
//! All quantities here are exact: `u64` for the integers, `Ratio<i64>`
//! for the quarter-integer symmetry measure. No floating point enters
//! any balance check.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from algebra-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// The trivial (empty) direct sum is not a candidate.
    #[error("candidate algebra must contain at least one factor")]
    EmptyCandidate,
}

/// The three associative real division rings, ordered `R < C < H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisionRing {
    R,
    C,
    H,
}

impl DivisionRing {
    /// Real dimension of the ring itself.
    pub fn real_dim(self) -> u64 {
        match self {
            DivisionRing::R => 1,
            DivisionRing::C => 2,
            DivisionRing::H => 4,
        }
    }

    pub const ALL: [DivisionRing; 3] = [DivisionRing::R, DivisionRing::C, DivisionRing::H];
}

impl std::fmt::Display for DivisionRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DivisionRing::R => write!(f, "R"),
            DivisionRing::C => write!(f, "C"),
            DivisionRing::H => write!(f, "H"),
        }
    }
}

/// A simple factor `M_m(Δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlgebraFactor {
    pub ring: DivisionRing,
    pub matrix_dim: u32,
}

impl AlgebraFactor {
    /// `M_m(Δ)`; panics on `m = 0`, which is not a factor at all.
    pub fn new(ring: DivisionRing, matrix_dim: u32) -> Self {
        assert!(matrix_dim >= 1, "matrix dimension must be at least 1");
        Self { ring, matrix_dim }
    }

    /// Real dimension `m² · dim_R(Δ)`.
    pub fn real_dim(&self) -> u64 {
        let m = self.matrix_dim as u64;
        m * m * self.ring.real_dim()
    }
}

impl std::fmt::Display for AlgebraFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.matrix_dim == 1 {
            write!(f, "{}", self.ring)
        } else {
            write!(f, "M{}({})", self.matrix_dim, self.ring)
        }
    }
}

/// The `(K, R, G, A)` profile of a factor or a direct sum of factors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorProfile {
    pub k: u64,
    pub r: u64,
    pub g: u64,
    pub a: u64,
}

impl FactorProfile {
    pub fn new(k: u64, r: u64, g: u64, a: u64) -> Self {
        Self { k, r, g, a }
    }

    fn add(self, other: Self) -> Self {
        Self {
            k: self.k + other.k,
            r: self.r + other.r,
            g: self.g + other.g,
            a: self.a + other.a,
        }
    }
}

/// Identifier of the per-factor `(K, R, G, A)` rule table below. Recorded
/// in search certificates so they stay comparable across tool versions.
pub const RULE_TABLE_VERSION: &str = "unitary-gauge-v1";

/// Structural integers of a single factor.
///
/// Rule table `unitary-gauge-v1`, from the compact unitary groups of the
/// three factor families:
///
/// * `M_m(R)`: `K = m²`, `R = m`; gauge `so(m)`, so `(G, A)` is `(0, 0)`
///   for `m = 1`, `(0, 1)` for `m = 2` (`so(2) ≅ u(1)`), and
///   `(m(m−1)/2, 0)` for `m ≥ 3`.
/// * `M_m(C)`: `K = 2m²`, `R = m`; gauge `u(m)`, so `(0, 1)` for `m = 1`
///   and `(m² − 1, 1)` for `m ≥ 2`.
/// * `M_m(H)`: `K = 4m²`, `R = 2m`; gauge `sp(m)`, so `(m(2m+1), 0)`.
pub fn factor_profile(factor: AlgebraFactor) -> FactorProfile {
    let m = factor.matrix_dim as u64;
    match factor.ring {
        DivisionRing::R => {
            let (g, a) = match m {
                1 => (0, 0),
                2 => (0, 1),
                _ => (m * (m - 1) / 2, 0),
            };
            FactorProfile::new(m * m, m, g, a)
        }
        DivisionRing::C => {
            let (g, a) = if m == 1 { (0, 1) } else { (m * m - 1, 1) };
            FactorProfile::new(2 * m * m, m, g, a)
        }
        DivisionRing::H => FactorProfile::new(4 * m * m, 2 * m, m * (2 * m + 1), 0),
    }
}

/// Componentwise sum of factor profiles. The empty list is rejected:
/// it would describe the trivial algebra, which is not a candidate.
pub fn sum_profiles(profiles: &[FactorProfile]) -> Result<FactorProfile, AlgebraError> {
    if profiles.is_empty() {
        return Err(AlgebraError::EmptyCandidate);
    }
    Ok(profiles
        .iter()
        .copied()
        .fold(FactorProfile::default(), FactorProfile::add))
}

/// Foundational accessibility `K · R`.
pub fn disc_accessibility(p: &FactorProfile) -> u64 {
    p.k * p.r
}

/// Symmetry accessibility `(G + A/2)² = (2G + A)² / 4`, exact.
pub fn sym_accessibility(p: &FactorProfile) -> Rational64 {
    let weighted = 2 * p.g + p.a;
    Rational64::new((weighted * weighted) as i64, 4)
}

/// Continuous accessibility `H_eff² / 2ⁿ`, exact.
///
/// `n` is capped at 62 so the power of two stays in `i64`; every use in
/// this crate has `n ≤ 12`.
pub fn cont_accessibility(h_eff: u64, n: u32) -> Rational64 {
    assert!(n <= 62, "spacetime dimension out of supported range");
    Rational64::new((h_eff * h_eff) as i64, 1i64 << n)
}

/// A multiset of factors in canonical sorted order (ring rank `R < C < H`,
/// then matrix dimension). The sorted form is the dedup key: direct sums
/// are order-insensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidateAlgebra {
    factors: Vec<AlgebraFactor>,
}

impl CandidateAlgebra {
    /// Canonicalizes the factor list. Errors on the empty multiset.
    pub fn new(mut factors: Vec<AlgebraFactor>) -> Result<Self, AlgebraError> {
        if factors.is_empty() {
            return Err(AlgebraError::EmptyCandidate);
        }
        factors.sort();
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[AlgebraFactor] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Summed `(K, R, G, A)` profile of the direct sum.
    pub fn profile(&self) -> FactorProfile {
        self.factors
            .iter()
            .map(|f| factor_profile(*f))
            .fold(FactorProfile::default(), FactorProfile::add)
    }

    /// Exact accessibility values of the candidate. The continuous
    /// measure needs a geometric realization `(H_eff, n)` and is left
    /// unset until one is chosen.
    pub fn accessibility(&self) -> AccessibilityProfile {
        let p = self.profile();
        AccessibilityProfile {
            disc: disc_accessibility(&p),
            sym: sym_accessibility(&p),
            cont: None,
        }
    }

    /// Integer form of the structural balance test:
    /// `(2G + A)² == 4·K·R`.
    pub fn is_structurally_balanced(&self) -> bool {
        let p = self.profile();
        let weighted = 2 * p.g + p.a;
        weighted * weighted == 4 * p.k * p.r
    }
}

impl std::fmt::Display for CandidateAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Exact accessibility values `(disc, sym, cont)` of a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessibilityProfile {
    pub disc: u64,
    pub sym: Rational64,
    /// `H_eff²/2ⁿ` once a geometric realization is attached.
    pub cont: Option<Rational64>,
}

impl AccessibilityProfile {
    /// Attach the continuous measure for a realization `(H_eff, n)`.
    pub fn with_realization(mut self, h_eff: u64, n: u32) -> Self {
        self.cont = Some(cont_accessibility(h_eff, n));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(ring: DivisionRing, m: u32) -> AlgebraFactor {
        AlgebraFactor::new(ring, m)
    }

    #[test]
    fn profile_of_complex_numbers() {
        assert_eq!(
            factor_profile(f(DivisionRing::C, 1)),
            FactorProfile::new(2, 1, 0, 1)
        );
    }

    #[test]
    fn profile_of_quaternions() {
        assert_eq!(
            factor_profile(f(DivisionRing::H, 1)),
            FactorProfile::new(4, 2, 3, 0)
        );
    }

    #[test]
    fn profile_of_three_by_three_complex() {
        assert_eq!(
            factor_profile(f(DivisionRing::C, 3)),
            FactorProfile::new(18, 3, 8, 1)
        );
    }

    #[test]
    fn winning_candidate_profile_is_24_6_11_2() {
        let algebra = CandidateAlgebra::new(vec![
            f(DivisionRing::C, 1),
            f(DivisionRing::H, 1),
            f(DivisionRing::C, 3),
        ])
        .unwrap();
        assert_eq!(algebra.profile(), FactorProfile::new(24, 6, 11, 2));
        assert!(algebra.is_structurally_balanced());
        let acc = algebra.accessibility().with_realization(48, 4);
        assert_eq!(acc.disc, 144);
        assert_eq!(acc.sym, Rational64::from_integer(144));
        assert_eq!(acc.cont, Some(Rational64::from_integer(144)));
    }

    #[test]
    fn sum_profiles_examples() {
        let single = [FactorProfile::new(2, 1, 0, 1)];
        assert_eq!(
            sum_profiles(&single).unwrap(),
            FactorProfile::new(2, 1, 0, 1)
        );

        let triple = [
            FactorProfile::new(2, 1, 0, 1),
            FactorProfile::new(4, 2, 3, 0),
            FactorProfile::new(18, 3, 8, 1),
        ];
        assert_eq!(
            sum_profiles(&triple).unwrap(),
            FactorProfile::new(24, 6, 11, 2)
        );

        let two_reals = [
            FactorProfile::new(1, 1, 0, 0),
            FactorProfile::new(1, 1, 0, 0),
        ];
        assert_eq!(
            sum_profiles(&two_reals).unwrap(),
            FactorProfile::new(2, 2, 0, 0)
        );

        assert_eq!(sum_profiles(&[]), Err(AlgebraError::EmptyCandidate));
    }

    #[test]
    fn disc_examples() {
        assert_eq!(disc_accessibility(&FactorProfile::new(24, 6, 0, 0)), 144);
        assert_eq!(disc_accessibility(&FactorProfile::new(1, 1, 0, 0)), 1);
        assert_eq!(disc_accessibility(&FactorProfile::new(6, 3, 0, 0)), 18);
    }

    #[test]
    fn sym_examples() {
        assert_eq!(
            sym_accessibility(&FactorProfile::new(0, 0, 11, 2)),
            Rational64::from_integer(144)
        );
        assert_eq!(
            sym_accessibility(&FactorProfile::new(0, 0, 0, 0)),
            Rational64::from_integer(0)
        );
        assert_eq!(
            sym_accessibility(&FactorProfile::new(0, 0, 0, 1)),
            Rational64::new(1, 4)
        );
    }

    #[test]
    fn cont_examples() {
        assert_eq!(cont_accessibility(48, 4), Rational64::from_integer(144));
        assert_eq!(cont_accessibility(12, 3), Rational64::from_integer(18));
        assert_eq!(cont_accessibility(0, 7), Rational64::from_integer(0));
    }

    #[test]
    fn sym_times_four_is_square_of_weighted_dimension() {
        for g in 0..30u64 {
            for a in 0..10u64 {
                let sym = sym_accessibility(&FactorProfile::new(0, 0, g, a));
                let four_sym = sym * Rational64::from_integer(4);
                assert!(four_sym.is_integer());
                let w = 2 * g + a;
                assert_eq!(four_sym.to_integer() as u64, w * w);
            }
        }
    }

    #[test]
    fn rule_table_sanity_bounds() {
        // K = m²·dim_R(Δ), G + A ≤ K, and K ≥ R for Δ ∈ {C, H}, over the
        // whole range the default search can reach.
        for ring in DivisionRing::ALL {
            for m in 1..=12u32 {
                let factor = f(ring, m);
                let p = factor_profile(factor);
                assert_eq!(p.k, factor.real_dim());
                assert!(p.g + p.a <= p.k, "gauge algebra exceeds {factor}");
                if ring != DivisionRing::R {
                    assert!(p.k >= p.r, "K < R for {factor}");
                }
            }
        }
    }

    #[test]
    fn canonical_form_sorts_and_dedups_ordering() {
        let a = CandidateAlgebra::new(vec![
            f(DivisionRing::H, 1),
            f(DivisionRing::C, 3),
            f(DivisionRing::C, 1),
        ])
        .unwrap();
        let b = CandidateAlgebra::new(vec![
            f(DivisionRing::C, 1),
            f(DivisionRing::C, 3),
            f(DivisionRing::H, 1),
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "C ⊕ M3(C) ⊕ H");
    }

    #[test]
    fn display_names() {
        assert_eq!(f(DivisionRing::R, 2).to_string(), "M2(R)");
        assert_eq!(f(DivisionRing::H, 1).to_string(), "H");
    }
}
