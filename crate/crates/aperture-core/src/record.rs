//! The sector record process: exact joint distributions over recorded
//! sector labels, Monte Carlo sampling, transition effect operators,
//! mixing detection, Markov checks, and memory-witness search.
//!
//! One step of the process is unitary evolution followed by recording a
//! sector label and conditioning the state on it. The next-step
//! transition probability out of sector `α` is `Tr(E σ)` with the
//! transition effect `E_β^{(α)} = P_α U† P_β U P_α`; when every such
//! effect is scalar on its sector the record is Markovian, and a
//! non-scalar effect that distinguishes two history-conditioned states
//! is a concrete memory witness.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::matrix::{dagger, frob_dist, trace_product_re, trace_re, CMatrix};
use crate::quantum::space::SectoredHilbertSpace;
use crate::quantum::state::{DensityOperator, Effect, QuantumError, UnitaryMap, EPS_PROB};
use crate::random::{derive_seed, rng_from};
use crate::scalar::{real, Scalar};
use num_complex::Complex;
use rand::Rng;

/// Exact-mode ceiling on the history tree: `sectors^steps` at most this.
pub const EXACT_MODE_CAP: u128 = 531_441; // 3^12

/// Default tolerance on conditional-probability gaps.
pub const WITNESS_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum RecordError {
    #[error("instrument needs at least one step")]
    NoSteps,
    #[error("unitary dimension {got} does not match the space dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("{histories} histories exceed the exact-mode cap {cap}; use sampling")]
    CapExceeded { histories: u128, cap: u128 },
    #[error("markov check needs histories of length >= 3, got {0}")]
    InsufficientLength(usize),
    #[error("witness search needs depth >= 2, got {0}")]
    InsufficientDepth(usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A fixed instrument run: the sectored space, one inter-interaction
/// unitary per step, and the initial epistemic state.
#[derive(Debug, Clone)]
pub struct InstrumentConfig<T: Scalar> {
    pub space: SectoredHilbertSpace,
    pub unitaries: Vec<UnitaryMap<T>>,
    pub initial_state: DensityOperator<T>,
}

impl<T: Scalar> InstrumentConfig<T> {
    pub fn new(
        space: SectoredHilbertSpace,
        unitaries: Vec<UnitaryMap<T>>,
        initial_state: DensityOperator<T>,
    ) -> Result<Self, RecordError> {
        if unitaries.is_empty() {
            return Err(RecordError::NoSteps);
        }
        let want = space.total_dim();
        for u in &unitaries {
            if u.dim() != want {
                return Err(RecordError::DimensionMismatch { got: u.dim(), want });
            }
        }
        if initial_state.dim() != want {
            return Err(RecordError::DimensionMismatch {
                got: initial_state.dim(),
                want,
            });
        }
        Ok(Self {
            space,
            unitaries,
            initial_state,
        })
    }

    pub fn steps(&self) -> usize {
        self.unitaries.len()
    }
}

/// A sequence of recorded sector labels (0-based internally; displayed
/// 1-based to match the sector numbering used everywhere else).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RecordHistory(pub Vec<usize>);

impl RecordHistory {
    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn child(&self, label: usize) -> Self {
        let mut v = self.0.clone();
        v.push(label);
        Self(v)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl std::fmt::Display for RecordHistory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Exact joint distribution over full-length histories, plus the mass
/// lost to pruned (numerically impossible) branches.
#[derive(Debug, Clone)]
pub struct JointDistribution<T: Scalar> {
    pub steps: usize,
    pub num_sectors: usize,
    pub probabilities: BTreeMap<RecordHistory, T>,
    /// Branches cut at the ε-probability floor, with the mass each carried.
    pub pruned: BTreeMap<RecordHistory, T>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn total_mass(&self) -> T {
        self.probabilities
            .values()
            .fold(T::zero(), |acc, &p| acc + p)
    }

    pub fn pruned_mass(&self) -> T {
        self.pruned.values().fold(T::zero(), |acc, &p| acc + p)
    }

    /// Marginal probability of a prefix (sums over completions).
    pub fn prefix_probability(&self, prefix: &[usize]) -> T {
        self.probabilities
            .iter()
            .filter(|(h, _)| h.labels().starts_with(prefix))
            .fold(T::zero(), |acc, (_, &p)| acc + p)
    }
}

fn evolve_raw<T: Scalar>(sigma: &CMatrix<T>, u: &UnitaryMap<T>) -> CMatrix<T> {
    u.matrix() * sigma * dagger(u.matrix())
}

fn sector_weight<T: Scalar>(sigma: &CMatrix<T>, space: &SectoredHilbertSpace, alpha: usize) -> T {
    let mut acc = T::zero();
    for i in space.sector_range(alpha) {
        acc += sigma[(i, i)].re;
    }
    acc
}

/// Zeroes everything outside the sector block and rescales to trace 1.
fn condition_on_sector<T: Scalar>(
    sigma: &CMatrix<T>,
    space: &SectoredHilbertSpace,
    alpha: usize,
    weight: T,
) -> CMatrix<T> {
    let d = sigma.nrows();
    let mut out = CMatrix::<T>::zeros(d, d);
    let range = space.sector_range(alpha);
    let inv = Complex::new(T::one() / weight, T::zero());
    for i in range.clone() {
        for j in range.clone() {
            out[(i, j)] = sigma[(i, j)] * inv;
        }
    }
    out
}

/// Exact tree evaluation of the nested conditioning/evolution
/// composition. Branch probabilities multiply along the recursion.
pub fn joint_distribution<T: Scalar>(
    cfg: &InstrumentConfig<T>,
) -> Result<JointDistribution<T>, RecordError> {
    let sectors = cfg.space.num_sectors();
    let steps = cfg.steps();
    let histories = (sectors as u128).pow(steps as u32);
    if histories > EXACT_MODE_CAP {
        return Err(RecordError::CapExceeded {
            histories,
            cap: EXACT_MODE_CAP,
        });
    }
    let eps = real::<T>(EPS_PROB);
    let mut frontier: Vec<(RecordHistory, CMatrix<T>, T)> = vec![(
        RecordHistory(Vec::new()),
        cfg.initial_state.matrix().clone(),
        T::one(),
    )];
    let mut pruned = BTreeMap::new();
    for u in &cfg.unitaries {
        let mut next = Vec::with_capacity(frontier.len() * sectors);
        for (history, sigma, prob) in frontier {
            let evolved = evolve_raw(&sigma, u);
            for alpha in 0..sectors {
                let w = sector_weight(&evolved, &cfg.space, alpha).max(T::zero());
                let branch_prob = prob * w;
                let child = history.child(alpha);
                if w <= eps {
                    if branch_prob > T::zero() {
                        pruned.insert(child, branch_prob);
                    }
                    continue;
                }
                let conditioned = condition_on_sector(&evolved, &cfg.space, alpha, w);
                next.push((child, conditioned, branch_prob));
            }
        }
        frontier = next;
    }
    let probabilities = frontier.into_iter().map(|(h, _, p)| (h, p)).collect();
    Ok(JointDistribution {
        steps,
        num_sectors: sectors,
        probabilities,
        pruned,
    })
}

/// I.i.d. Monte Carlo histories of the record process. Per-sample
/// streams are derived from `(seed, sample index)`, so the output is
/// reproducible and independent of the worker count.
pub fn sample_records<T: Scalar>(
    cfg: &InstrumentConfig<T>,
    num_samples: usize,
    seed: u64,
) -> Vec<RecordHistory> {
    assert!(num_samples >= 1, "need at least one sample");
    (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from(derive_seed(seed, i as u64));
            sample_one(cfg, &mut rng)
        })
        .collect()
}

fn sample_one<T: Scalar, R: Rng>(cfg: &InstrumentConfig<T>, rng: &mut R) -> RecordHistory {
    let sectors = cfg.space.num_sectors();
    let eps = real::<T>(EPS_PROB);
    let mut sigma = cfg.initial_state.matrix().clone();
    let mut labels = Vec::with_capacity(cfg.steps());
    for u in &cfg.unitaries {
        let evolved = evolve_raw(&sigma, u);
        let mut weights: Vec<T> = (0..sectors)
            .map(|a| sector_weight(&evolved, &cfg.space, a).max(T::zero()))
            .collect();
        // Impossible branches carry no mass; renormalize the residual.
        for w in weights.iter_mut() {
            if *w <= eps {
                *w = T::zero();
            }
        }
        let total: T = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        let draw = real::<T>(rng.gen::<f64>()) * total;
        let mut acc = T::zero();
        let mut chosen = sectors - 1;
        for (a, &w) in weights.iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            acc += w;
            if draw < acc {
                chosen = a;
                break;
            }
        }
        let w = sector_weight(&evolved, &cfg.space, chosen).max(T::zero());
        sigma = condition_on_sector(&evolved, &cfg.space, chosen, w);
        labels.push(chosen);
    }
    RecordHistory(labels)
}

/// Empirical frequencies of sampled histories.
pub fn empirical_distribution<T: Scalar>(samples: &[RecordHistory]) -> BTreeMap<RecordHistory, T> {
    let mut counts: BTreeMap<RecordHistory, usize> = BTreeMap::new();
    for h in samples {
        *counts.entry(h.clone()).or_insert(0) += 1;
    }
    let n = real::<T>(samples.len() as f64);
    counts
        .into_iter()
        .map(|(h, c)| (h, real::<T>(c as f64) / n))
        .collect()
}

/// The transition effect operator `E_β^{(α)} = P_α U† P_β U P_α`,
/// supported on sector `α`.
#[derive(Debug, Clone)]
pub struct TransitionEffect<T: Scalar> {
    pub alpha: usize,
    pub beta: usize,
    effect: Effect<T>,
}

impl<T: Scalar> TransitionEffect<T> {
    pub fn matrix(&self) -> &CMatrix<T> {
        self.effect.matrix()
    }

    pub fn effect(&self) -> &Effect<T> {
        &self.effect
    }

    /// Transition probability `Tr(E σ)` out of a state on sector `α`.
    pub fn probability(&self, sigma: &DensityOperator<T>) -> T {
        trace_product_re(self.matrix(), sigma.matrix())
    }

    /// Eigenvalues restricted to the sector block.
    pub fn sector_spectrum(&self, space: &SectoredHilbertSpace) -> Vec<T> {
        let range = space.sector_range(self.alpha);
        let block = self
            .matrix()
            .view((range.start, range.start), (range.len(), range.len()))
            .into_owned();
        crate::quantum::matrix::hermitian_eigenvalues(&block)
    }
}

pub fn transition_effect<T: Scalar>(
    u: &UnitaryMap<T>,
    alpha: usize,
    beta: usize,
    space: &SectoredHilbertSpace,
) -> TransitionEffect<T> {
    let p_a = space.sector_projection::<T>(alpha);
    let p_b = space.sector_projection::<T>(beta);
    let m = p_a.matrix() * dagger(u.matrix()) * p_b.matrix() * u.matrix() * p_a.matrix();
    TransitionEffect {
        alpha,
        beta,
        effect: Effect::trusted(crate::quantum::matrix::hermitize(&m)),
    }
}

/// True when the effect deviates from its scalar part on the sector:
/// `‖E − (Tr E / r_α)·P_α‖_F > tol`. Rank-1 sectors can never mix.
pub fn is_mixing<T: Scalar>(e: &TransitionEffect<T>, space: &SectoredHilbertSpace, tol: T) -> bool {
    let r = real::<T>(space.sector_dim(e.alpha) as f64);
    let scalar = trace_re(e.matrix()) / r;
    let p_a = space.sector_projection::<T>(e.alpha);
    let scaled = p_a.matrix() * Complex::new(scalar, T::zero());
    frob_dist(e.matrix(), &scaled) > tol
}

/// Scalar-form check for all exits out of sector `α` under `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarResetReport<T> {
    /// True iff every `E_β^{(α)}` is scalar on the sector.
    pub markovian_exit: bool,
    /// Exit constants `c_αβ = Tr(E)/r_α` (exact transition rates when
    /// `markovian_exit` holds).
    pub constants: Vec<T>,
}

pub fn scalar_reset_check<T: Scalar>(
    u: &UnitaryMap<T>,
    alpha: usize,
    space: &SectoredHilbertSpace,
    tol: T,
) -> ScalarResetReport<T> {
    let r = real::<T>(space.sector_dim(alpha) as f64);
    let mut markovian_exit = true;
    let mut constants = Vec::with_capacity(space.num_sectors());
    for beta in 0..space.num_sectors() {
        let e = transition_effect(u, alpha, beta, space);
        constants.push(trace_re(e.matrix()) / r);
        if is_mixing(&e, space, tol) {
            markovian_exit = false;
        }
    }
    ScalarResetReport {
        markovian_exit,
        constants,
    }
}

/// Worst conditional-probability disagreement between two pasts that
/// share the current sector label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovViolation<T> {
    pub history_a: RecordHistory,
    pub history_b: RecordHistory,
    pub next_label: usize,
    pub conditional_a: T,
    pub conditional_b: T,
    pub gap: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport<T> {
    pub markovian: bool,
    pub worst: Option<MarkovViolation<T>>,
}

/// Compares `Pr(next = β | prefix)` across all prefix pairs of equal
/// length that end in the same sector (both with defined conditionals),
/// at every step. Reports the maximum absolute difference.
pub fn markov_check<T: Scalar>(
    dist: &JointDistribution<T>,
    tol: T,
) -> Result<MarkovReport<T>, RecordError> {
    if dist.steps < 3 {
        return Err(RecordError::InsufficientLength(dist.steps));
    }
    let eps = real::<T>(EPS_PROB);
    let mut worst: Option<MarkovViolation<T>> = None;
    for k in 1..dist.steps {
        // Marginals at prefix length k and joint with the next label.
        let mut prefix_mass: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        let mut joint_next: BTreeMap<(Vec<usize>, usize), T> = BTreeMap::new();
        for (h, &p) in &dist.probabilities {
            let prefix = h.labels()[..k].to_vec();
            let next = h.labels()[k];
            *prefix_mass.entry(prefix.clone()).or_insert_with(T::zero) += p;
            *joint_next.entry((prefix, next)).or_insert_with(T::zero) += p;
        }
        let live: Vec<(Vec<usize>, T)> = prefix_mass
            .iter()
            .filter(|(_, &m)| m > eps)
            .map(|(h, &m)| (h.clone(), m))
            .collect();
        for (i, (ha, ma)) in live.iter().enumerate() {
            for (hb, mb) in live.iter().skip(i + 1) {
                if ha.last() != hb.last() {
                    continue;
                }
                for beta in 0..dist.num_sectors {
                    let pa = joint_next
                        .get(&(ha.clone(), beta))
                        .copied()
                        .unwrap_or_else(T::zero)
                        / *ma;
                    let pb = joint_next
                        .get(&(hb.clone(), beta))
                        .copied()
                        .unwrap_or_else(T::zero)
                        / *mb;
                    let gap = (pa - pb).abs();
                    if worst.as_ref().is_none_or(|w| gap > w.gap) {
                        worst = Some(MarkovViolation {
                            history_a: RecordHistory(ha.clone()),
                            history_b: RecordHistory(hb.clone()),
                            next_label: beta,
                            conditional_a: pa,
                            conditional_b: pb,
                            gap,
                        });
                    }
                }
            }
        }
    }
    let markovian = worst.as_ref().is_none_or(|w| w.gap <= tol);
    Ok(MarkovReport { markovian, worst })
}

/// A verified non-Markovianity witness: two histories ending in the
/// same sector whose next-step conditionals differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness<T> {
    pub step: usize,
    pub history_a: RecordHistory,
    pub history_b: RecordHistory,
    pub alpha: usize,
    pub beta: usize,
    pub conditional_a: T,
    pub conditional_b: T,
    pub gap: T,
    /// Frobenius distance between the two history-conditioned states.
    pub state_distance: T,
}

/// Searches histories up to length `depth − 1` for a pair ending in the
/// same sector whose post-interaction states are distinguished by a
/// transition effect. Absence of a witness returns `None`.
pub fn witness_search<T: Scalar>(
    cfg: &InstrumentConfig<T>,
    depth: usize,
    tol: T,
) -> Result<Option<Witness<T>>, RecordError> {
    if depth < 2 {
        return Err(RecordError::InsufficientDepth(depth));
    }
    let sectors = cfg.space.num_sectors();
    let eps = real::<T>(EPS_PROB);
    let max_k = depth.saturating_sub(1).min(cfg.steps().saturating_sub(1));
    let mut frontier: Vec<(RecordHistory, CMatrix<T>, T)> = vec![(
        RecordHistory(Vec::new()),
        cfg.initial_state.matrix().clone(),
        T::one(),
    )];
    let mut best: Option<Witness<T>> = None;
    for k in 1..=max_k {
        let u = &cfg.unitaries[k - 1];
        let mut next = Vec::with_capacity(frontier.len() * sectors);
        for (history, sigma, prob) in frontier {
            let evolved = evolve_raw(&sigma, u);
            for alpha in 0..sectors {
                let w = sector_weight(&evolved, &cfg.space, alpha).max(T::zero());
                if w <= eps {
                    continue;
                }
                let conditioned = condition_on_sector(&evolved, &cfg.space, alpha, w);
                next.push((history.child(alpha), conditioned, prob * w));
            }
        }
        frontier = next;
        // The next-step unitary decides whether hidden intra-sector
        // differences become visible.
        let u_next = &cfg.unitaries[k];
        for alpha in 0..sectors {
            let group: Vec<&(RecordHistory, CMatrix<T>, T)> = frontier
                .iter()
                .filter(|(h, _, _)| h.last() == Some(alpha))
                .collect();
            for beta in 0..sectors {
                let e = transition_effect(u_next, alpha, beta, &cfg.space);
                for (i, (ha, sa, _)) in group.iter().enumerate() {
                    for (hb, sb, _) in group.iter().skip(i + 1) {
                        let ta = trace_product_re(e.matrix(), sa);
                        let tb = trace_product_re(e.matrix(), sb);
                        let gap = (ta - tb).abs();
                        let state_distance = frob_dist(sa, sb);
                        if gap > tol
                            && state_distance > tol
                            && best.as_ref().is_none_or(|w| gap > w.gap)
                        {
                            best = Some(Witness {
                                step: k,
                                history_a: ha.clone(),
                                history_b: hb.clone(),
                                alpha,
                                beta,
                                conditional_a: ta,
                                conditional_b: tb,
                                gap,
                                state_distance,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, rng_from};

    fn space123() -> SectoredHilbertSpace {
        SectoredHilbertSpace::new(vec![1, 2, 3])
    }

    fn identity_cfg(steps: usize, initial: DensityOperator<f64>) -> InstrumentConfig<f64> {
        InstrumentConfig::new(space123(), vec![UnitaryMap::identity(6); steps], initial).unwrap()
    }

    /// First `min(r_a, r_b)` basis vectors of two sectors swapped.
    fn sector_swap(space: &SectoredHilbertSpace, a: usize, b: usize) -> UnitaryMap<f64> {
        let mut perm: Vec<usize> = (0..space.total_dim()).collect();
        let ra = space.sector_range(a);
        let rb = space.sector_range(b);
        for (i, j) in ra.zip(rb) {
            perm.swap(i, j);
        }
        UnitaryMap::permutation(&perm)
    }

    #[test]
    fn identity_dynamics_repeats_the_label() {
        let cfg = identity_cfg(4, DensityOperator::pure_basis(6, 1));
        let dist = joint_distribution(&cfg).unwrap();
        let all_two = RecordHistory(vec![1, 1, 1, 1]);
        assert!((dist.probabilities[&all_two] - 1.0).abs() < 1e-12);
        assert_eq!(dist.probabilities.len(), 1);
        assert_eq!(all_two.to_string(), "2,2,2,2");
    }

    #[test]
    fn one_step_sector_weights() {
        let cfg = identity_cfg(1, DensityOperator::maximally_mixed(6));
        let dist = joint_distribution(&cfg).unwrap();
        let probs: Vec<f64> = (0..3)
            .map(|a| dist.probabilities[&RecordHistory(vec![a])])
            .collect();
        assert!((probs[0] - 1.0 / 6.0).abs() < 1e-14);
        assert!((probs[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!((probs[2] - 1.0 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn mass_conservation_with_pruning() {
        let mut rng = rng_from(23);
        for steps in [1usize, 2, 3] {
            let cfg = InstrumentConfig::new(
                space123(),
                (0..steps)
                    .map(|_| haar_unitary::<f64, _>(6, &mut rng))
                    .collect(),
                DensityOperator::pure_basis(6, 3),
            )
            .unwrap();
            let dist = joint_distribution(&cfg).unwrap();
            let total = dist.total_mass() + dist.pruned_mass();
            assert!((total - 1.0).abs() < 1e-9, "steps {steps}: {total}");
        }
    }

    #[test]
    fn sampler_matches_identity_dynamics() {
        let cfg = identity_cfg(3, DensityOperator::pure_basis(6, 1));
        let samples = sample_records(&cfg, 200, 7);
        assert!(samples.iter().all(|h| h.labels() == [1, 1, 1]));
    }

    #[test]
    fn sampler_frequency_of_uniform_start() {
        let cfg = identity_cfg(1, DensityOperator::maximally_mixed(6));
        let n = 100_000;
        let samples = sample_records(&cfg, n, 12345);
        let freq = empirical_distribution::<f64>(&samples);
        let p = 1.0 / 6.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let got = freq[&RecordHistory(vec![0])];
        assert!((got - p).abs() <= 3.0 * sigma, "freq {got}");
    }

    #[test]
    fn sampler_agrees_with_exact_distribution() {
        let mut rng = rng_from(31);
        let cfg = InstrumentConfig::new(
            space123(),
            (0..3)
                .map(|_| haar_unitary::<f64, _>(6, &mut rng))
                .collect(),
            DensityOperator::maximally_mixed(6),
        )
        .unwrap();
        let exact = joint_distribution(&cfg).unwrap();
        let n = 100_000usize;
        let freq = empirical_distribution::<f64>(&sample_records(&cfg, n, 999));
        for (h, &p) in &exact.probabilities {
            let f = freq.get(h).copied().unwrap_or(0.0);
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (f - p).abs() <= 3.0 * sigma + 1e-12,
                "history {h}: exact {p}, freq {f}"
            );
        }
    }

    #[test]
    fn transition_effect_identity_and_swap() {
        let space = space123();
        let id = UnitaryMap::<f64>::identity(6);
        for alpha in 0..3 {
            for beta in 0..3 {
                let e = transition_effect(&id, alpha, beta, &space);
                let expect = if alpha == beta {
                    space.sector_projection::<f64>(alpha).matrix().clone()
                } else {
                    CMatrix::<f64>::zeros(6, 6)
                };
                assert!(frob_dist(e.matrix(), &expect) < 1e-14);
            }
        }
        // Swap of sector 2 (indices 1,2) with the first two of sector 3.
        let swap = sector_swap(&space, 1, 2);
        let e32 = transition_effect(&swap, 1, 2, &space);
        assert!(frob_dist(e32.matrix(), space.sector_projection::<f64>(1).matrix()) < 1e-14);
        let e22 = transition_effect(&swap, 1, 1, &space);
        assert!(frob_dist(e22.matrix(), &CMatrix::<f64>::zeros(6, 6)) < 1e-14);
    }

    #[test]
    fn transition_effect_trace_identity() {
        // Tr(E σ) = Tr(P_β U σ U†) for states supported on sector α.
        let space = space123();
        let mut rng = rng_from(41);
        let u = haar_unitary::<f64, _>(6, &mut rng);
        for alpha in 0..3 {
            let p_a = space.sector_projection::<f64>(alpha);
            for _ in 0..20 {
                let raw = crate::random::random_density::<f64, _>(6, &mut rng);
                let sigma = crate::quantum::luders_update(&raw, &p_a).unwrap();
                for beta in 0..3 {
                    let e = transition_effect(&u, alpha, beta, &space);
                    let via_effect = e.probability(&sigma);
                    let moved = evolve_raw(sigma.matrix(), &u);
                    let direct = sector_weight(&moved, &space, beta);
                    assert!((via_effect - direct).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn effect_completeness() {
        let space = space123();
        let mut rng = rng_from(43);
        for _ in 0..10 {
            let u = haar_unitary::<f64, _>(6, &mut rng);
            for alpha in 0..3 {
                let sum = (0..3)
                    .map(|beta| transition_effect(&u, alpha, beta, &space))
                    .fold(CMatrix::<f64>::zeros(6, 6), |acc, e| acc + e.matrix());
                let p_a = space.sector_projection::<f64>(alpha);
                assert!(frob_dist(&sum, p_a.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn mixing_examples() {
        let space = space123();
        // Scalar effect: identity dynamics on any sector.
        let id = UnitaryMap::<f64>::identity(6);
        let e = transition_effect(&id, 1, 1, &space);
        assert!(!is_mixing(&e, &space, 1e-10));
        // Rank-1 sector exits are never mixing, whatever the unitary.
        let mut rng = rng_from(47);
        for _ in 0..10 {
            let u = haar_unitary::<f64, _>(6, &mut rng);
            for beta in 0..3 {
                let e = transition_effect(&u, 0, beta, &space);
                assert!(!is_mixing(&e, &space, 1e-10));
            }
        }
        // A generic unitary mixes the larger sectors.
        let u = haar_unitary::<f64, _>(6, &mut rng);
        let mixing_any = (0..3).any(|beta| {
            let e = transition_effect(&u, 1, beta, &space);
            is_mixing(&e, &space, 1e-6)
        });
        assert!(mixing_any);
    }

    #[test]
    fn scalar_reset_examples() {
        let space = space123();
        let id = UnitaryMap::<f64>::identity(6);
        let report = scalar_reset_check(&id, 1, &space, 1e-10);
        assert!(report.markovian_exit);
        assert_eq!(report.constants, vec![0.0, 1.0, 0.0]);

        // Block-diagonal (sector-wise) unitaries never mix sectors.
        let mut rng = rng_from(53);
        let block = crate::random::sector_unitary::<f64, _>(&space, &mut rng);
        for alpha in 0..3 {
            let report = scalar_reset_check(&block, alpha, &space, 1e-9);
            assert!(report.markovian_exit);
            let sum: f64 = report.constants.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }

        // A generic unitary fails the scalar form on some sector.
        let u = haar_unitary::<f64, _>(6, &mut rng);
        let any_fail = (0..3).any(|a| !scalar_reset_check(&u, a, &space, 1e-6).markovian_exit);
        assert!(any_fail);
    }

    #[test]
    fn markov_check_identity_dynamics() {
        let cfg = identity_cfg(3, DensityOperator::maximally_mixed(6));
        let dist = joint_distribution(&cfg).unwrap();
        let report = markov_check(&dist, WITNESS_TOL).unwrap();
        assert!(report.markovian);
    }

    #[test]
    fn markov_check_needs_length_three() {
        let cfg = identity_cfg(2, DensityOperator::maximally_mixed(6));
        let dist = joint_distribution(&cfg).unwrap();
        assert_eq!(
            markov_check(&dist, WITNESS_TOL).unwrap_err(),
            RecordError::InsufficientLength(2)
        );
    }

    #[test]
    fn sector_wise_dynamics_is_markovian() {
        // Scalar reset holds for all sectors, so the record is Markovian.
        let space = space123();
        let mut rng = rng_from(59);
        let us: Vec<UnitaryMap<f64>> = (0..3)
            .map(|_| crate::random::sector_unitary(&space, &mut rng))
            .collect();
        for u in &us {
            for alpha in 0..3 {
                assert!(scalar_reset_check(u, alpha, &space, 1e-9).markovian_exit);
            }
        }
        let cfg = InstrumentConfig::new(space, us, DensityOperator::maximally_mixed(6)).unwrap();
        let dist = joint_distribution(&cfg).unwrap();
        assert!(markov_check(&dist, 1e-8).unwrap().markovian);
    }

    #[test]
    fn identity_dynamics_has_no_witness() {
        let cfg = identity_cfg(3, DensityOperator::maximally_mixed(6));
        assert!(witness_search(&cfg, 3, WITNESS_TOL).unwrap().is_none());
    }

    #[test]
    fn seeded_mixing_dynamics_yields_a_witness() {
        let mut rng = rng_from(61);
        let u = haar_unitary::<f64, _>(6, &mut rng);
        let cfg =
            InstrumentConfig::new(space123(), vec![u; 3], DensityOperator::maximally_mixed(6))
                .unwrap();
        let witness = witness_search(&cfg, 3, WITNESS_TOL)
            .unwrap()
            .expect("witness");
        assert!(witness.gap > 1e-3, "gap {}", witness.gap);
        assert_eq!(witness.history_a.last(), witness.history_b.last());
        // The exact tree agrees: the record is non-Markovian.
        let dist = joint_distribution(&cfg).unwrap();
        let report = markov_check(&dist, WITNESS_TOL).unwrap();
        assert!(!report.markovian);
        assert!(report.worst.unwrap().gap >= witness.gap - 1e-9);
    }

    #[test]
    fn witnesses_never_come_from_rank_one_sectors() {
        // A rank-1 sector admits a single conditioned state, so no pair
        // of histories ending there can disagree.
        for seed in [3u64, 11, 61, 101] {
            let mut rng = rng_from(seed);
            let u = haar_unitary::<f64, _>(6, &mut rng);
            let cfg =
                InstrumentConfig::new(space123(), vec![u; 3], DensityOperator::maximally_mixed(6))
                    .unwrap();
            if let Some(w) = witness_search(&cfg, 3, WITNESS_TOL).unwrap() {
                assert!(space123().sector_dim(w.alpha) >= 2, "seed {seed}");
            }
        }
    }

    #[test]
    fn witness_depth_precondition() {
        let cfg = identity_cfg(3, DensityOperator::maximally_mixed(6));
        assert_eq!(
            witness_search(&cfg, 1, WITNESS_TOL).unwrap_err(),
            RecordError::InsufficientDepth(1)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = identity_cfg(14, DensityOperator::maximally_mixed(6));
        assert!(matches!(
            joint_distribution(&cfg),
            Err(RecordError::CapExceeded { .. })
        ));
    }
}
