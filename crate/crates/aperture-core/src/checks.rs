//! Reusable verification sweeps over the engine's derived properties.
//!
//! These back the CLI check mode and the acceptance suite: each sweep
//! runs a seeded batch of randomized cases and reports the worst
//! deviation seen, so callers can assert it against the tolerance they
//! care about. Everything here runs on `f64`.

use rand::Rng;

use crate::boundary::{verify_context_free, ContextFreeVerdict};
use crate::quantum::matrix::{
    basis_vector, dagger, frob_dist, quadratic_form_re, CMatrix, CVector,
};
use crate::quantum::ops::{born_probability, effect_expectation, evolve, luders_update};
use crate::quantum::space::SectoredHilbertSpace;
use crate::quantum::state::{DensityOperator, Effect, Projection, UnitaryMap};
use crate::quantum::tomography::{
    born_probabilities, canonical_family, reconstruct_canonical, Reconstructor,
};
use crate::quantum::valuation::ValuationFunctional;
use crate::random::{
    derive_seed, haar_unitary, random_complete_family, random_density, random_projection,
    random_traceless_hermitian_in, rng_from, sector_unitary,
};
use crate::record::{
    empirical_distribution, is_mixing, joint_distribution, sample_records, transition_effect,
    InstrumentConfig,
};

/// Result of one randomized sweep: how many cases ran and the largest
/// deviation any of them produced.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepOutcome {
    pub cases: usize,
    pub worst: f64,
}

impl SweepOutcome {
    fn from_deviations(devs: impl IntoIterator<Item = f64>) -> Self {
        let mut cases = 0;
        let mut worst = 0.0f64;
        for d in devs {
            cases += 1;
            if d > worst {
                worst = d;
            }
        }
        Self { cases, worst }
    }
}

/// Σ_k p(ρ, P_k) over complete orthogonal families must be 1.
pub fn finite_additivity_sweep(dim: usize, families: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..families).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let parts = 2 + (i % (dim.min(8) - 1));
        let family = random_complete_family::<f64, _>(dim, parts, &mut rng);
        let total: f64 = family
            .iter()
            .map(|p| born_probability(&rho, p).unwrap())
            .sum();
        (total - 1.0).abs()
    }))
}

/// Born probabilities depend on the projection alone, not on the
/// completion it is embedded in. Exact by construction; kept as a
/// regression against any future context-dependent caching.
pub fn noncontextuality_sweep(dim: usize, cases: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..cases).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let rank = 1 + (i % (dim - 1));
        let p = random_projection::<f64, _>(dim, rank, &mut rng);
        let in_context_a = born_probability(&rho, &p).unwrap();
        // A different completion of the same projection.
        let in_context_b = {
            let complement = Projection::new(CMatrix::<f64>::identity(dim, dim) - p.matrix())
                .expect("complement of a projection");
            let _ = born_probability(&rho, &complement).unwrap();
            born_probability(&rho, &p).unwrap()
        };
        (in_context_a - in_context_b).abs()
    }))
}

/// (L1) and (L2) for the conditioned state, worst deviation across
/// random `(ρ, P)` pairs and rank-one sub-events of `P`.
pub fn luders_axiom_sweep(dim: usize, cases: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..cases).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let rank = 1 + (i % (dim - 1));
        let p = random_projection::<f64, _>(dim, rank, &mut rng);
        let prob = born_probability(&rho, &p).unwrap();
        let post = luders_update(&rho, &p).unwrap();
        let mut worst = (born_probability(&post, &p).unwrap() - 1.0).abs();
        // Rank-one sub-events Q = |v⟩⟨v| ≤ P as quadratic forms.
        for v in probe_vectors(&p, &mut rng) {
            let lhs = quadratic_form_re(post.matrix(), &v);
            let rhs = quadratic_form_re(rho.matrix(), &v) / prob;
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    }))
}

/// Unit vectors spanning the range of `p`: its eigenbasis plus the
/// pairwise superpositions that make the induced rank-one family
/// informationally complete on that range.
fn probe_vectors<R: Rng>(p: &Projection<f64>, rng: &mut R) -> Vec<CVector<f64>> {
    let basis = range_basis(p);
    let mut probes = basis.clone();
    let w = 1.0 / 2.0f64.sqrt();
    for a in 0..basis.len() {
        for b in (a + 1)..basis.len() {
            let i = crate::scalar::imag_unit::<f64>();
            probes.push((&basis[a] + &basis[b]) * crate::scalar::complex::<f64>(w, 0.0));
            probes.push((&basis[a] + &basis[b] * i) * crate::scalar::complex::<f64>(w, 0.0));
            probes.push((&basis[a] - &basis[b]) * crate::scalar::complex::<f64>(w, 0.0));
            probes.push((&basis[a] - &basis[b] * i) * crate::scalar::complex::<f64>(w, 0.0));
        }
    }
    // A couple of generic directions inside the range.
    for _ in 0..2 {
        let mut v = CVector::<f64>::zeros(p.dim());
        for b in &basis {
            let z = crate::scalar::complex::<f64>(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            );
            v += b * z;
        }
        let norm = v.norm();
        probes.push(v / crate::scalar::complex::<f64>(norm, 0.0));
    }
    probes
}

/// Orthonormal basis of the range of a projection (eigenvectors with
/// eigenvalue near 1).
fn range_basis(p: &Projection<f64>) -> Vec<CVector<f64>> {
    let eig = nalgebra::SymmetricEigen::new(p.matrix().clone());
    let mut basis = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 0.5 {
            basis.push(eig.eigenvectors.column(k).into_owned());
        }
    }
    basis
}

/// Outcome of the Lüders uniqueness rejection sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RejectionOutcome {
    pub cases: usize,
    pub rejected: usize,
}

/// Perturbs each conditioned state by a traceless Hermitian supported
/// inside `P` (Frobenius norm `perturbation`) and checks that some
/// rank-one sub-event of `P` detects the (L2) violation beyond `tol`.
pub fn luders_uniqueness_sweep(
    dim: usize,
    cases: usize,
    perturbation: f64,
    tol: f64,
    seed: u64,
) -> RejectionOutcome {
    let mut rejected = 0;
    for i in 0..cases {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let rank = 2 + (i % (dim - 1)).min(dim - 2);
        let p = random_projection::<f64, _>(dim, rank, &mut rng);
        let prob = born_probability(&rho, &p).unwrap();
        let post = luders_update(&rho, &p).unwrap();
        let h = random_traceless_hermitian_in(&p, perturbation, &mut rng)
            .expect("rank >= 2 admits a traceless direction");
        let perturbed = post.matrix() + h;
        let violated = probe_vectors(&p, &mut rng).iter().any(|v| {
            let lhs = quadratic_form_re(&perturbed, v);
            let rhs = quadratic_form_re(rho.matrix(), v) / prob;
            (lhs - rhs).abs() > tol
        });
        if violated {
            rejected += 1;
        }
    }
    RejectionOutcome { cases, rejected }
}

/// `p_t(P) = p_0(U†PU)` for the evolved state.
pub fn evolution_consistency_sweep(dim: usize, cases: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..cases).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let u = haar_unitary::<f64, _>(dim, &mut rng);
        let rank = 1 + (i % (dim - 1));
        let p = random_projection::<f64, _>(dim, rank, &mut rng);
        let lhs = born_probability(&evolve(&rho, &u).unwrap(), &p).unwrap();
        let heisenberg = Projection::trusted(dagger(u.matrix()) * p.matrix() * u.matrix());
        let rhs = born_probability(&rho, &heisenberg).unwrap();
        (lhs - rhs).abs()
    }))
}

/// `p(E + F) = p(E) + p(F)` for effects with `E + F ≤ I`.
pub fn effect_additivity_sweep(dim: usize, cases: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..cases).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let e = random_subnormalized_effect(dim, &mut rng);
        let f = random_subnormalized_effect(dim, &mut rng);
        let sum = Effect::new(e.matrix() + f.matrix()).expect("E + F stays below I");
        let lhs = effect_expectation(&rho, &sum).unwrap();
        let rhs = effect_expectation(&rho, &e).unwrap() + effect_expectation(&rho, &f).unwrap();
        (lhs - rhs).abs()
    }))
}

/// Random effect with spectrum inside [0, 1/2].
fn random_subnormalized_effect<R: Rng>(dim: usize, rng: &mut R) -> Effect<f64> {
    let g = crate::random::ginibre::<f64, R>(dim, dim, rng);
    let w = &g * dagger(&g);
    let top = crate::quantum::matrix::hermitian_eigenvalues(&w)
        .last()
        .copied()
        .unwrap();
    Effect::trusted(w * num_complex::Complex::new(0.5 / top, 0.0))
}

/// Tomographic round trip through the least-squares reconstructor.
pub fn reconstruction_lsq_sweep(dim: usize, states: usize, seed: u64) -> SweepOutcome {
    let family = canonical_family::<f64>(dim);
    let solver = Reconstructor::new(&family, dim).expect("canonical family is complete");
    SweepOutcome::from_deviations((0..states).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let probs = born_probabilities(&rho, &family).unwrap();
        let back = solver.reconstruct(&probs).unwrap();
        rho.distance(&back)
    }))
}

/// Tomographic round trip through the canonical closed-form dual.
pub fn reconstruction_canonical_sweep(dim: usize, states: usize, seed: u64) -> SweepOutcome {
    let family = canonical_family::<f64>(dim);
    SweepOutcome::from_deviations((0..states).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let rho = random_density::<f64, _>(dim, &mut rng);
        let probs = born_probabilities(&rho, &family).unwrap();
        let back = reconstruct_canonical(&probs, dim).unwrap();
        rho.distance(&back)
    }))
}

/// Valuation linearity and the expectation identity on random gambles.
pub fn valuation_identity_sweep(cases: usize, seed: u64) -> SweepOutcome {
    SweepOutcome::from_deviations((0..cases).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let raw: [f64; 3] = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        let total = raw[0] + raw[1] + raw[2];
        let p = [raw[0] / total, raw[1] / total, raw[2] / total];
        let v = ValuationFunctional::new(p).unwrap();
        let f = [gamble(&mut rng), gamble(&mut rng), gamble(&mut rng)];
        let g = [gamble(&mut rng), gamble(&mut rng), gamble(&mut rng)];
        let (a, b) = (gamble(&mut rng), gamble(&mut rng));
        let combo = [
            a * f[0] + b * g[0],
            a * f[1] + b * g[1],
            a * f[2] + b * g[2],
        ];
        let linearity =
            (v.expectation(combo) - (a * v.expectation(f) + b * v.expectation(g))).abs();
        let dot = p[0] * f[0] + p[1] * f[1] + p[2] * f[2];
        linearity.max((v.expectation(f) - dot).abs())
    }))
}

fn gamble<R: Rng>(rng: &mut R) -> f64 {
    rng.gen::<f64>() * 20.0 - 10.0
}

/// Invariance of every sum-of-sector projection under sector-wise
/// unitaries; returns the worst `‖UQU† − Q‖_F` over the whole sweep.
pub fn central_invariance_sweep(
    space: &SectoredHilbertSpace,
    unitaries: usize,
    seed: u64,
) -> SweepOutcome {
    let subsets: Vec<Vec<usize>> = all_subsets(space.num_sectors());
    SweepOutcome::from_deviations((0..unitaries).map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let u = sector_unitary::<f64, _>(space, &mut rng);
        let mut worst = 0.0f64;
        for subset in &subsets {
            let q = space.subset_projection::<f64>(subset);
            let moved = u.matrix() * q.matrix() * dagger(u.matrix());
            worst = worst.max(frob_dist(&moved, q.matrix()));
        }
        worst
    }))
}

fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..(1usize << n))
        .map(|mask| (0..n).filter(|k| mask & (1 << k) != 0).collect())
        .collect()
}

/// Outcome of the counterexample hunt over non-central projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CounterexampleOutcome {
    pub cases: usize,
    pub found: usize,
    /// Largest trial index at which a counterexample appeared.
    pub worst_trial: usize,
}

/// Seeded non-central rank-one projections must be moved by some
/// sector-wise unitary within `trials` attempts. Cases cycle through
/// generic vectors and vectors confined to one multi-dimensional
/// sector (the hard case for phase unitaries).
pub fn noncentral_counterexample_sweep(
    space: &SectoredHilbertSpace,
    cases: usize,
    trials: usize,
    seed: u64,
) -> CounterexampleOutcome {
    let mut found = 0;
    let mut worst_trial = 0;
    let wide: Vec<usize> = (0..space.num_sectors())
        .filter(|&a| space.sector_dim(a) >= 2)
        .collect();
    for i in 0..cases {
        let mut rng = rng_from(derive_seed(seed, 1_000_000 + i as u64));
        let dim = space.total_dim();
        let v = match i % (wide.len() + 1) {
            0 => crate::random::random_state_vector::<f64, _>(dim, &mut rng),
            k => {
                // Confined inside one sector with dim >= 2.
                let alpha = wide[k - 1];
                let range = space.sector_range(alpha);
                let inner = crate::random::random_state_vector::<f64, _>(range.len(), &mut rng);
                let mut v = CVector::<f64>::zeros(dim);
                for (j, idx) in range.enumerate() {
                    v[idx] = inner[j];
                }
                v
            }
        };
        let q = Projection::rank_one(&v);
        match verify_context_free(&q, space, trials, derive_seed(seed, i as u64), 1e-9)
            .expect("trials >= 1")
        {
            ContextFreeVerdict::Counterexample { trial, .. } => {
                found += 1;
                worst_trial = worst_trial.max(trial);
            }
            ContextFreeVerdict::Invariant { .. } => {}
        }
    }
    CounterexampleOutcome {
        cases,
        found,
        worst_trial,
    }
}

/// Agreement between the exact joint distribution and Monte Carlo
/// frequencies, as a worst z-score over the support.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AgreementOutcome {
    pub configs: usize,
    pub worst_z: f64,
    /// Histories sampled outside the exact support (must stay 0).
    pub support_violations: usize,
}

/// Runs `configs` seeded three-step instruments on sector dims (1,2,3)
/// and compares exact joint probabilities against `samples` Monte Carlo
/// draws.
pub fn record_agreement_sweep(configs: usize, samples: usize, seed: u64) -> AgreementOutcome {
    let space = SectoredHilbertSpace::new(vec![1, 2, 3]);
    let mut worst_z = 0.0f64;
    let mut support_violations = 0;
    for c in 0..configs {
        let mut rng = rng_from(derive_seed(seed, c as u64));
        let steps = 3;
        let unitaries: Vec<UnitaryMap<f64>> = (0..steps)
            .map(|_| haar_unitary::<f64, _>(space.total_dim(), &mut rng))
            .collect();
        let initial = if c % 2 == 0 {
            DensityOperator::maximally_mixed(space.total_dim())
        } else {
            random_density::<f64, _>(space.total_dim(), &mut rng)
        };
        let cfg = InstrumentConfig::new(space.clone(), unitaries, initial).unwrap();
        let exact = joint_distribution(&cfg).unwrap();
        let drawn = sample_records(&cfg, samples, derive_seed(seed, 777 + c as u64));
        let freq = empirical_distribution::<f64>(&drawn);
        for (h, f) in &freq {
            if !exact.probabilities.contains_key(h) {
                support_violations += 1;
                let _ = f;
            }
        }
        for (h, &p) in &exact.probabilities {
            let f = freq.get(h).copied().unwrap_or(0.0);
            let sigma = (p * (1.0 - p) / samples as f64).sqrt();
            if sigma > 0.0 {
                worst_z = worst_z.max((f - p).abs() / sigma);
            } else if (f - p).abs() > 0.0 {
                support_violations += 1;
            }
        }
    }
    AgreementOutcome {
        configs,
        worst_z,
        support_violations,
    }
}

/// Completeness `Σ_β E_β^{(α)} = P_α` over seeded unitaries, worst
/// Frobenius deviation.
pub fn effect_completeness_sweep(
    space: &SectoredHilbertSpace,
    unitaries: usize,
    seed: u64,
) -> SweepOutcome {
    SweepOutcome::from_deviations((0..unitaries).flat_map(|i| {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let u = haar_unitary::<f64, _>(space.total_dim(), &mut rng);
        (0..space.num_sectors())
            .map(|alpha| {
                let d = space.total_dim();
                let sum = (0..space.num_sectors())
                    .map(|beta| transition_effect(&u, alpha, beta, space))
                    .fold(CMatrix::<f64>::zeros(d, d), |acc, e| acc + e.matrix());
                frob_dist(&sum, space.sector_projection::<f64>(alpha).matrix())
            })
            .collect::<Vec<_>>()
    }))
}

/// Every exit out of a rank-one sector must be non-mixing, whatever the
/// unitary. Returns the number of violations (must be 0).
pub fn rank_one_exit_sweep(space: &SectoredHilbertSpace, unitaries: usize, seed: u64) -> usize {
    let mut violations = 0;
    for i in 0..unitaries {
        let mut rng = rng_from(derive_seed(seed, i as u64));
        let u = haar_unitary::<f64, _>(space.total_dim(), &mut rng);
        for alpha in 0..space.num_sectors() {
            if space.sector_dim(alpha) != 1 {
                continue;
            }
            for beta in 0..space.num_sectors() {
                let e = transition_effect(&u, alpha, beta, space);
                if is_mixing(&e, space, 1e-10) {
                    violations += 1;
                }
            }
        }
    }
    violations
}

/// Quick sanity: evolving and measuring the standard basis reproduces
/// the uniform distribution from the maximally mixed state.
pub fn mixed_state_uniformity(dim: usize) -> SweepOutcome {
    let rho = DensityOperator::<f64>::maximally_mixed(dim);
    SweepOutcome::from_deviations((0..dim).map(|k| {
        let p = Projection::rank_one(&basis_vector::<f64>(dim, k));
        (born_probability(&rho, &p).unwrap() - 1.0 / dim as f64).abs()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_pass_at_small_sizes() {
        assert!(finite_additivity_sweep(6, 10, 1).worst < 1e-10);
        assert!(noncontextuality_sweep(6, 10, 2).worst == 0.0);
        assert!(luders_axiom_sweep(6, 10, 3).worst < 1e-10);
        assert!(evolution_consistency_sweep(6, 10, 4).worst < 1e-11);
        assert!(effect_additivity_sweep(6, 10, 5).worst < 1e-12);
        assert!(reconstruction_lsq_sweep(6, 5, 6).worst < 1e-9);
        assert!(reconstruction_canonical_sweep(6, 5, 7).worst < 1e-12);
        assert!(valuation_identity_sweep(20, 8).worst < 1e-12);
        assert!(mixed_state_uniformity(6).worst < 1e-15);
    }

    #[test]
    fn uniqueness_sweep_rejects_all() {
        let out = luders_uniqueness_sweep(6, 10, 1e-3, 1e-9, 9);
        assert_eq!(out.rejected, out.cases);
    }

    #[test]
    fn boundary_sweeps() {
        let space = SectoredHilbertSpace::new(vec![1, 2, 3]);
        assert!(central_invariance_sweep(&space, 25, 10).worst <= 1e-12);
        let out = noncentral_counterexample_sweep(&space, 12, 10, 11);
        assert_eq!(out.found, out.cases);
        assert!(out.worst_trial < 10);
    }

    #[test]
    fn record_sweeps() {
        let agreement = record_agreement_sweep(2, 20_000, 12);
        assert!(agreement.worst_z <= 3.0, "z = {}", agreement.worst_z);
        assert_eq!(agreement.support_violations, 0);
        let space = SectoredHilbertSpace::new(vec![1, 2, 3]);
        assert!(effect_completeness_sweep(&space, 5, 13).worst < 1e-10);
        assert_eq!(rank_one_exit_sweep(&space, 5, 14), 0);
    }
}
