//! Exhaustive search over bounded candidate algebras.
//!
//! The structural balance equation `(G + A/2)² = K·R` is Diophantine, so
//! within the stated bounds the solution set is decided by finite
//! enumeration. Candidates are multisets of simple factors; the stream
//! yields each canonical multiset exactly once, in a fixed deterministic
//! order (lexicographic over the admissible factor alphabet, shorter
//! sums first). Everything here is exact integer arithmetic.

use std::collections::BTreeMap;

use num_integer::Roots;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    disc_accessibility, factor_profile, AlgebraFactor, CandidateAlgebra, DivisionRing,
    FactorProfile, RULE_TABLE_VERSION,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search bounds must have max_disc >= 1 and max_summands >= 1")]
    InvalidBounds,
}

/// Bounds making the search provably exhaustive: a cap on the total
/// foundational accessibility and a cap on the number of summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_disc: u64,
    pub max_summands: usize,
}

impl Default for SearchBounds {
    /// `K·R ≤ 144` and at most 12 summands (since `K·R ≥ n²` for an
    /// n-factor sum, 12 is the largest admissible count at 144).
    fn default() -> Self {
        Self {
            max_disc: 144,
            max_summands: 12,
        }
    }
}

impl SearchBounds {
    pub fn new(max_disc: u64, max_summands: usize) -> Result<Self, SearchError> {
        if max_disc < 1 || max_summands < 1 {
            return Err(SearchError::InvalidBounds);
        }
        Ok(Self {
            max_disc,
            max_summands,
        })
    }

    /// A factor is admissible when already on its own it respects the
    /// disc cap: `K·R = m²·dim_R(Δ)·R(m, Δ) ≤ max_disc`.
    pub fn admits(&self, factor: AlgebraFactor) -> bool {
        let p = factor_profile(factor);
        p.k * p.r <= self.max_disc
    }

    /// The admissible factor alphabet in canonical order.
    pub fn admissible_factors(&self) -> Vec<AlgebraFactor> {
        let mut out = Vec::new();
        for ring in DivisionRing::ALL {
            let mut m = 1u32;
            loop {
                let factor = AlgebraFactor::new(ring, m);
                if !self.admits(factor) {
                    break;
                }
                out.push(factor);
                m += 1;
            }
        }
        out.sort();
        out
    }

    /// Largest admissible matrix dimension per division ring.
    pub fn max_matrix_dim(&self) -> BTreeMap<DivisionRing, u32> {
        let mut caps = BTreeMap::new();
        for factor in self.admissible_factors() {
            let entry = caps.entry(factor.ring).or_insert(0);
            *entry = (*entry).max(factor.matrix_dim);
        }
        caps
    }
}

/// Streaming enumeration of candidate algebras under `bounds`.
///
/// Internally walks every non-decreasing index sequence over the
/// admissible alphabet (each such sequence is one canonical multiset),
/// and yields those whose total `K·R` respects the disc cap. The raw
/// walk count is kept because it is the paper-comparable notion of
/// "candidate combinations examined".
pub struct CandidateStream {
    alphabet: Vec<AlgebraFactor>,
    profiles: Vec<FactorProfile>,
    bounds: SearchBounds,
    state: Option<Vec<usize>>,
    examined: u64,
}

impl CandidateStream {
    fn new(bounds: &SearchBounds) -> Self {
        let alphabet = bounds.admissible_factors();
        let profiles = alphabet.iter().map(|f| factor_profile(*f)).collect();
        let state = if alphabet.is_empty() {
            None
        } else {
            Some(vec![0])
        };
        Self {
            alphabet,
            profiles,
            bounds: bounds.clone(),
            state,
            examined: 0,
        }
    }

    /// Multisets examined so far, including those rejected by the disc
    /// cap. After exhaustion this is the total examined count.
    pub fn examined(&self) -> u64 {
        self.examined
    }

    fn advance(&mut self) {
        let Some(seq) = self.state.as_mut() else {
            return;
        };
        let top = self.alphabet.len() - 1;
        // Lexicographic successor among non-decreasing sequences.
        if let Some(i) = seq.iter().rposition(|&v| v < top) {
            let next = seq[i] + 1;
            for v in seq.iter_mut().skip(i) {
                *v = next;
            }
        } else if seq.len() < self.bounds.max_summands {
            let len = seq.len() + 1;
            seq.clear();
            seq.resize(len, 0);
        } else {
            self.state = None;
        }
    }

    fn profile_of(&self, seq: &[usize]) -> FactorProfile {
        let mut total = FactorProfile::default();
        for &i in seq {
            let p = self.profiles[i];
            total.k += p.k;
            total.r += p.r;
            total.g += p.g;
            total.a += p.a;
        }
        total
    }
}

impl Iterator for CandidateStream {
    type Item = (CandidateAlgebra, FactorProfile);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let seq = self.state.as_ref()?.clone();
            self.examined += 1;
            let profile = self.profile_of(&seq);
            self.advance();
            if profile.k * profile.r <= self.bounds.max_disc {
                let factors = seq.iter().map(|&i| self.alphabet[i]).collect();
                let candidate =
                    CandidateAlgebra::new(factors).expect("stream sequences are nonempty");
                return Some((candidate, profile));
            }
        }
    }
}

/// Every canonical multiset of admissible factors with total
/// `K·R ≤ max_disc` and at most `max_summands` factors, exactly once.
pub fn enumerate_candidates(bounds: &SearchBounds) -> impl Iterator<Item = CandidateAlgebra> {
    CandidateStream::new(bounds).map(|(c, _)| c)
}

/// One structurally balanced candidate in a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub candidate: CandidateAlgebra,
    pub display: String,
    pub profile: FactorProfile,
    pub disc: u64,
    pub sym: Rational64,
}

/// Reproducible record of one full structural search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub bounds: SearchBounds,
    pub max_matrix_dim: BTreeMap<DivisionRing, u32>,
    pub rule_table_version: String,
    /// Multisets examined by the enumerator (before the disc-cap filter).
    pub candidates_enumerated: u64,
    /// All balanced candidates, ascending by disc value then canonical form.
    pub solutions: Vec<SolutionRecord>,
    pub minimal_solution: Option<CandidateAlgebra>,
    /// False when several solutions tie at the minimal disc value.
    pub minimal_is_unique: bool,
}

impl SearchCertificate {
    /// Solution table as CSV (`factors,K,R,G,A,disc`).
    pub fn solutions_csv(&self) -> String {
        let mut out = String::from("factors,K,R,G,A,disc\n");
        for s in &self.solutions {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.display, s.profile.k, s.profile.r, s.profile.g, s.profile.a, s.disc
            ));
        }
        out
    }
}

/// Runs the exhaustive structural-balance search and certifies the
/// result: all candidates with `sym = disc` exactly, the minimal one,
/// and whether the minimum is unique.
pub fn structural_solutions(bounds: &SearchBounds) -> SearchCertificate {
    let mut stream = CandidateStream::new(bounds);
    let mut solutions: Vec<SolutionRecord> = Vec::new();
    for (candidate, profile) in stream.by_ref() {
        let weighted = 2 * profile.g + profile.a;
        let disc = disc_accessibility(&profile);
        if weighted * weighted == 4 * profile.k * profile.r {
            solutions.push(SolutionRecord {
                display: candidate.to_string(),
                sym: crate::algebra::sym_accessibility(&profile),
                candidate,
                profile,
                disc,
            });
        }
    }
    solutions.sort_by(|a, b| (a.disc, &a.candidate).cmp(&(b.disc, &b.candidate)));
    let minimal_solution = solutions.first().map(|s| s.candidate.clone());
    let minimal_is_unique = match solutions.first() {
        Some(first) => solutions.iter().filter(|s| s.disc == first.disc).count() == 1,
        None => false,
    };
    SearchCertificate {
        bounds: bounds.clone(),
        max_matrix_dim: bounds.max_matrix_dim(),
        rule_table_version: RULE_TABLE_VERSION.to_string(),
        candidates_enumerated: stream.examined(),
        solutions,
        minimal_solution,
        minimal_is_unique,
    }
}

/// A solution of the representational balance equation
/// `H²/2ⁿ = disc` with `H = N_gen · gen_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepBalanceSolution {
    /// Even spacetime dimension.
    pub n: u32,
    pub n_gen: u64,
    pub h: u64,
    /// Gauge-anomaly exclusion applies for n ≥ 6.
    pub excluded_by_anomaly: bool,
}

/// Recorded (not recomputed) exclusion rule for higher even dimensions:
/// the pure abelian anomaly constraint at n = 6 reduces to a quartic
/// with value −5/36, which has no real solution; higher even n inherit
/// the obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyRule {
    pub excluded_from_n: u32,
    pub quartic_constant: Rational64,
}

impl Default for AnomalyRule {
    fn default() -> Self {
        Self {
            excluded_from_n: 6,
            quartic_constant: Rational64::new(-5, 36),
        }
    }
}

/// Solves the representational balance equation over even `n` in
/// `n_range`. Non-square intermediates are skipped, not errors.
pub fn representational_solutions(
    disc: u64,
    gen_size: u64,
    n_range: std::ops::RangeInclusive<u32>,
) -> Vec<RepBalanceSolution> {
    let rule = AnomalyRule::default();
    let mut out = Vec::new();
    for n in n_range {
        if n % 2 != 0 || n > 62 {
            continue;
        }
        // N² = disc · 2ⁿ / gen_size², exactly or not at all.
        let numerator = (disc as u128) << n;
        let denom = (gen_size as u128) * (gen_size as u128);
        if !numerator.is_multiple_of(denom) {
            continue;
        }
        let n_gen_sq = numerator / denom;
        let n_gen = n_gen_sq.sqrt();
        if n_gen * n_gen != n_gen_sq {
            continue;
        }
        out.push(RepBalanceSolution {
            n,
            n_gen: n_gen as u64,
            h: n_gen as u64 * gen_size,
            excluded_by_anomaly: n >= rule.excluded_from_n,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor(ring: DivisionRing, m: u32) -> AlgebraFactor {
        AlgebraFactor::new(ring, m)
    }

    #[test]
    fn default_alphabet_caps() {
        let bounds = SearchBounds::default();
        let caps = bounds.max_matrix_dim();
        assert_eq!(caps[&DivisionRing::R], 5); // 5³ = 125 ≤ 144 < 216
        assert_eq!(caps[&DivisionRing::C], 4); // 2·4³ = 128 ≤ 144
        assert_eq!(caps[&DivisionRing::H], 2); // 8·2³ = 64 ≤ 144
        assert_eq!(bounds.admissible_factors().len(), 11);
    }

    #[test]
    fn tiny_bounds_enumeration() {
        let bounds = SearchBounds::new(2, 1).unwrap();
        let got: Vec<_> = enumerate_candidates(&bounds).collect();
        let want = vec![
            CandidateAlgebra::new(vec![factor(DivisionRing::R, 1)]).unwrap(),
            CandidateAlgebra::new(vec![factor(DivisionRing::C, 1)]).unwrap(),
        ];
        assert_eq!(got, want);

        let bounds = SearchBounds::new(1, 1).unwrap();
        let got: Vec<_> = enumerate_candidates(&bounds).collect();
        assert_eq!(
            got,
            vec![CandidateAlgebra::new(vec![factor(DivisionRing::R, 1)]).unwrap()]
        );
    }

    /// Independent brute-force generator: all factor sequences with
    /// repetition, deduplicated through the canonical form.
    fn brute_force(bounds: &SearchBounds) -> std::collections::BTreeSet<CandidateAlgebra> {
        let alphabet = bounds.admissible_factors();
        let mut set = std::collections::BTreeSet::new();
        let mut stack: Vec<Vec<AlgebraFactor>> = alphabet.iter().map(|f| vec![*f]).collect();
        while let Some(seq) = stack.pop() {
            let candidate = CandidateAlgebra::new(seq.clone()).unwrap();
            let p = candidate.profile();
            if p.k * p.r <= bounds.max_disc {
                set.insert(candidate);
            }
            if seq.len() < bounds.max_summands {
                for f in &alphabet {
                    let mut next = seq.clone();
                    next.push(*f);
                    stack.push(next);
                }
            }
        }
        set
    }

    #[test]
    fn enumeration_matches_brute_force_and_subbound_filter() {
        let big = SearchBounds::new(40, 3).unwrap();
        let big_set: std::collections::BTreeSet<_> = enumerate_candidates(&big).collect();
        assert_eq!(big_set, brute_force(&big));

        for (disc, summands) in [(10u64, 2usize), (20, 3), (40, 2)] {
            let sub = SearchBounds::new(disc, summands).unwrap();
            let sub_set: std::collections::BTreeSet<_> = enumerate_candidates(&sub).collect();
            assert_eq!(sub_set, brute_force(&sub));
            // Sub-bound result is exactly the filter of the bigger run.
            let filtered: std::collections::BTreeSet<_> = big_set
                .iter()
                .filter(|c| {
                    let p = c.profile();
                    p.k * p.r <= disc
                        && c.num_factors() <= summands
                        && c.factors().iter().all(|f| sub.admits(*f))
                })
                .cloned()
                .collect();
            assert_eq!(sub_set, filtered);
        }
    }

    #[test]
    fn no_solutions_below_eleven() {
        let cert = structural_solutions(&SearchBounds::new(10, 12).unwrap());
        assert!(cert.solutions.is_empty());
        assert_eq!(cert.minimal_solution, None);
        assert!(!cert.minimal_is_unique);
    }

    #[test]
    fn certificate_is_reproducible() {
        let bounds = SearchBounds::new(60, 4).unwrap();
        let a = structural_solutions(&bounds);
        let b = structural_solutions(&bounds);
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn solutions_are_sorted_and_balanced() {
        let cert = structural_solutions(&SearchBounds::default());
        assert!(!cert.solutions.is_empty());
        for pair in cert.solutions.windows(2) {
            assert!(pair[0].disc <= pair[1].disc);
        }
        for s in &cert.solutions {
            let w = 2 * s.profile.g + s.profile.a;
            assert_eq!(w * w, 4 * s.profile.k * s.profile.r);
            assert_eq!(
                s.sym,
                Rational64::from_integer(s.disc as i64),
                "solution {} has sym != disc",
                s.display
            );
        }
        assert_eq!(
            cert.minimal_solution.as_ref(),
            cert.solutions.first().map(|s| &s.candidate)
        );
    }

    #[test]
    fn representational_balance_examples() {
        let sols = representational_solutions(144, 16, 2..=12);
        assert!(sols.iter().all(|s| s.n % 2 == 0));
        let four = sols.iter().find(|s| s.n == 4).unwrap();
        assert_eq!(
            (four.n_gen, four.h, four.excluded_by_anomaly),
            (3, 48, false)
        );
        let six = sols.iter().find(|s| s.n == 6).unwrap();
        assert_eq!((six.n_gen, six.h, six.excluded_by_anomaly), (6, 96, true));
        assert!(sols.iter().all(|s| s.n != 5 && s.n != 2));
        // H²/2ⁿ = disc exactly for every emitted solution.
        for s in &sols {
            assert_eq!((s.h as u128 * s.h as u128) >> s.n, 144);
            assert_eq!((s.h as u128 * s.h as u128) % (1u128 << s.n), 0);
        }
    }

    #[test]
    fn csv_has_expected_header_and_rows() {
        let cert = structural_solutions(&SearchBounds::default());
        let csv = cert.solutions_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("factors,K,R,G,A,disc"));
        assert_eq!(lines.count(), cert.solutions.len());
    }
}
