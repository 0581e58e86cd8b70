//! Two-qubit singlet correlations, CHSH, no-signaling, and the
//! interference deviation from classical probability composition.
//!
//! The doublet degree of freedom is modeled directly on `C² ⊗ C²`; an
//! embedding helper places the pair inside two copies of a dim-2 sector
//! of a larger sectored space for integration checks.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::matrix::{dagger, frob_dist, kron, partial_trace_first, CMatrix, CVector};
use crate::quantum::ops::born_probability;
use crate::quantum::space::SectoredHilbertSpace;
use crate::quantum::state::{DensityOperator, Projection, QuantumError, UnitaryMap};
use crate::random::{derive_seed, rng_from};
use crate::scalar::{complex, imag_unit, real, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum BellError {
    #[error("measurement direction must be a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("kraus operators do not preserve the trace (defect {defect:e})")]
    NotTracePreserving { defect: f64 },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis family is not orthonormal within tolerance")]
    NotOrthonormal,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A spin measurement direction `n̂ ∈ R³`, unit to 1e−12.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting<T: Scalar> {
    pub n: [T; 3],
}

impl<T: Scalar> MeasurementSetting<T> {
    pub fn new(n: [T; 3]) -> Result<Self, BellError> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - T::one()).abs() > real(1e-12) {
            return Err(BellError::NotUnit {
                norm: num_traits::ToPrimitive::to_f64(&norm).unwrap_or(f64::NAN),
            });
        }
        Ok(Self { n })
    }

    /// Direction in the x–z plane at angle `theta` from the z axis.
    pub fn planar(theta: T) -> Self {
        Self {
            n: [theta.sin(), T::zero(), theta.cos()],
        }
    }
}

/// Pauli matrices in the standard convention: `σ_z` diagonal, `σ_x`
/// real, `σ_y` imaginary.
pub fn pauli<T: Scalar>() -> [CMatrix<T>; 3] {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let i = imag_unit::<T>();
    [
        CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
        CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
        CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
    ]
}

/// `σ_n̂ = n̂ · σ⃗`.
pub fn spin_observable<T: Scalar>(setting: &MeasurementSetting<T>) -> CMatrix<T> {
    let [sx, sy, sz] = pauli::<T>();
    sx * Complex::new(setting.n[0], T::zero())
        + sy * Complex::new(setting.n[1], T::zero())
        + sz * Complex::new(setting.n[2], T::zero())
}

/// Spectral projectors `Π_± = (I ± σ_n̂)/2`.
pub fn spin_projectors<T: Scalar>(
    setting: &MeasurementSetting<T>,
) -> (Projection<T>, Projection<T>) {
    let s = spin_observable(setting);
    let id = CMatrix::<T>::identity(2, 2);
    let half = complex::<T>(0.5, 0.0);
    (
        Projection::trusted((&id + &s) * half),
        Projection::trusted((&id - &s) * half),
    )
}

/// The singlet state `(|+−⟩ − |−+⟩)/√2` on `C² ⊗ C²`.
pub fn singlet_state<T: Scalar>() -> DensityOperator<T> {
    let mut psi = CVector::<T>::zeros(4);
    let w = T::one() / real::<T>(2.0).sqrt();
    psi[1] = Complex::new(w, T::zero());
    psi[2] = Complex::new(-w, T::zero());
    DensityOperator::pure(&psi)
}

/// Joint ±1-outcome correlation of spin measurements on a two-qubit
/// state, computed through the Born rule on the four joint projectors.
pub fn correlation_on_state<T: Scalar>(
    state: &DensityOperator<T>,
    a: &MeasurementSetting<T>,
    b: &MeasurementSetting<T>,
) -> Result<T, BellError> {
    let (ap, am) = spin_projectors(a);
    let (bp, bm) = spin_projectors(b);
    let mut value = T::zero();
    for (sign_a, pa) in [(T::one(), &ap), (-T::one(), &am)] {
        for (sign_b, pb) in [(T::one(), &bp), (-T::one(), &bm)] {
            let joint = Projection::trusted(kron(pa.matrix(), pb.matrix()));
            let p = born_probability(state, &joint)?;
            value += sign_a * sign_b * p;
        }
    }
    Ok(value)
}

/// Singlet correlation; the closed form is `−n̂_A · n̂_B`.
pub fn correlation<T: Scalar>(
    a: &MeasurementSetting<T>,
    b: &MeasurementSetting<T>,
) -> Result<T, BellError> {
    correlation_on_state(&singlet_state(), a, b)
}

pub fn correlation_closed_form<T: Scalar>(
    a: &MeasurementSetting<T>,
    b: &MeasurementSetting<T>,
) -> T {
    -(a.n[0] * b.n[0] + a.n[1] * b.n[1] + a.n[2] * b.n[2])
}

/// CHSH configuration: four settings and a two-qubit state.
#[derive(Debug, Clone)]
pub struct ChshConfig<T: Scalar> {
    pub a: MeasurementSetting<T>,
    pub a_prime: MeasurementSetting<T>,
    pub b: MeasurementSetting<T>,
    pub b_prime: MeasurementSetting<T>,
    pub state: DensityOperator<T>,
}

impl<T: Scalar> ChshConfig<T> {
    /// The planar configuration that saturates the quantum bound on the
    /// singlet: relative angles π/4 except `θ_AB' = 3π/4`.
    pub fn canonical() -> Self {
        let quarter = T::frac_pi_4();
        Self {
            a: MeasurementSetting::planar(T::zero()),
            a_prime: MeasurementSetting::planar(T::frac_pi_2()),
            b: MeasurementSetting::planar(quarter),
            b_prime: MeasurementSetting::planar(quarter + T::frac_pi_2()),
            state: singlet_state(),
        }
    }
}

/// `|⟨S⟩| = |C(A,B) − C(A,B') + C(A',B) + C(A',B')|` via Born-rule
/// expectations.
pub fn chsh_value<T: Scalar>(cfg: &ChshConfig<T>) -> Result<T, BellError> {
    let c_ab = correlation_on_state(&cfg.state, &cfg.a, &cfg.b)?;
    let c_ab2 = correlation_on_state(&cfg.state, &cfg.a, &cfg.b_prime)?;
    let c_a2b = correlation_on_state(&cfg.state, &cfg.a_prime, &cfg.b)?;
    let c_a2b2 = correlation_on_state(&cfg.state, &cfg.a_prime, &cfg.b_prime)?;
    Ok((c_ab - c_ab2 + c_a2b + c_a2b2).abs())
}

/// Summary of a planar CHSH scan on the singlet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshScan<T> {
    pub configs: usize,
    pub max_value: T,
    pub max_angles: [T; 4],
}

/// One evaluated scan point: four planar angles and the CHSH value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshScanRow<T> {
    pub angles: [T; 4],
    pub value: T,
}

/// Evaluates `configs` planar setting quadruples (uniform grid with
/// seeded jitter) on the singlet.
pub fn chsh_planar_scan_rows<T: Scalar>(configs: usize, seed: u64) -> Vec<ChshScanRow<T>> {
    assert!(configs >= 1);
    // Grid resolution: smallest g with g⁴ ≥ configs.
    let g = (configs as f64).powf(0.25).ceil() as usize;
    (0..configs)
        .into_par_iter()
        .map(|idx| {
            let mut rng = rng_from(derive_seed(seed, idx as u64));
            let step = T::two_pi() / real::<T>(g as f64);
            let mut angles = [T::zero(); 4];
            let mut rem = idx;
            for slot in angles.iter_mut() {
                let cell = rem % g;
                rem /= g;
                let jitter: T = real::<T>(rand::Rng::gen::<f64>(&mut rng));
                *slot = (real::<T>(cell as f64) + jitter) * step;
            }
            let cfg = ChshConfig {
                a: MeasurementSetting::planar(angles[0]),
                a_prime: MeasurementSetting::planar(angles[1]),
                b: MeasurementSetting::planar(angles[2]),
                b_prime: MeasurementSetting::planar(angles[3]),
                state: singlet_state(),
            };
            let value = chsh_value(&cfg).expect("planar settings are valid");
            ChshScanRow { angles, value }
        })
        .collect()
}

/// Scan summary: the largest CHSH value over the sampled grid.
pub fn chsh_planar_scan<T: Scalar>(configs: usize, seed: u64) -> Result<ChshScan<T>, BellError> {
    let rows = chsh_planar_scan_rows::<T>(configs, seed);
    let mut best = (T::zero(), [T::zero(); 4]);
    for row in &rows {
        if row.value > best.0 {
            best = (row.value, row.angles);
        }
    }
    Ok(ChshScan {
        configs,
        max_value: best.0,
        max_angles: best.1,
    })
}

/// A trace-preserving Kraus channel on one local factor.
#[derive(Debug, Clone)]
pub struct KrausChannel<T: Scalar> {
    ops: Vec<CMatrix<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    /// Validates `Σ K†K = I` at the constructor tolerance.
    pub fn new(ops: Vec<CMatrix<T>>) -> Result<Self, BellError> {
        assert!(!ops.is_empty(), "channel needs at least one Kraus operator");
        let dim = ops[0].nrows();
        let mut sum = CMatrix::<T>::zeros(dim, dim);
        for k in &ops {
            sum += dagger(k) * k;
        }
        let defect = frob_dist(&sum, &CMatrix::<T>::identity(dim, dim));
        if defect > real(1e-10) {
            return Err(BellError::NotTracePreserving {
                defect: num_traits::ToPrimitive::to_f64(&defect).unwrap_or(f64::NAN),
            });
        }
        Ok(Self { ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            ops: vec![CMatrix::<T>::identity(dim, dim)],
        }
    }

    /// Full dephasing in the computational basis.
    pub fn dephasing(dim: usize) -> Self {
        let ops = (0..dim)
            .map(|k| {
                let mut m = CMatrix::<T>::zeros(dim, dim);
                m[(k, k)] = Complex::new(T::one(), T::zero());
                m
            })
            .collect();
        Self { ops }
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    /// Applies `Φ ⊗ id` to a bipartite state with this factor first.
    pub fn apply_to_first(&self, rho: &CMatrix<T>, db: usize) -> CMatrix<T> {
        let id_b = CMatrix::<T>::identity(db, db);
        let mut out = CMatrix::<T>::zeros(rho.nrows(), rho.ncols());
        for k in &self.ops {
            let lifted = kron(k, &id_b);
            out += &lifted * rho * dagger(&lifted);
        }
        out
    }
}

/// `‖Tr_A((Φ_A ⊗ id)(ρ)) − Tr_A(ρ)‖_F` for a channel acting on the
/// first factor of a bipartite state.
pub fn no_signaling_deviation<T: Scalar>(
    rho: &DensityOperator<T>,
    channel: &KrausChannel<T>,
) -> Result<T, BellError> {
    let da = channel.dim();
    let total = rho.dim();
    if !total.is_multiple_of(da) {
        return Err(BellError::Quantum(QuantumError::DimensionMismatch(
            total, da,
        )));
    }
    let db = total / da;
    let after = channel.apply_to_first(rho.matrix(), db);
    let reduced_after = partial_trace_first(&after, da, db);
    let reduced_before = partial_trace_first(rho.matrix(), da, db);
    Ok(frob_dist(&reduced_after, &reduced_before))
}

/// Transition amplitudes `T_ab = ⟨basis_a | U | basis_b⟩`.
fn amplitude<T: Scalar>(u: &UnitaryMap<T>, basis: &[CVector<T>], a: usize, b: usize) -> Complex<T> {
    (basis[a].adjoint() * u.matrix() * &basis[b])[(0, 0)]
}

/// Deviation between the quantum two-step transition probability
/// `|Σ_k T_ik(U₂) T_kj(U₁)|²` and its classical composition
/// `Σ_k |T_ik(U₂)|² |T_kj(U₁)|²`. Zero exactly when no cross-terms
/// survive (e.g. both unitaries diagonal in the chosen basis).
pub fn interference_deviation<T: Scalar>(
    u1: &UnitaryMap<T>,
    u2: &UnitaryMap<T>,
    i: usize,
    j: usize,
    basis: Option<&[CVector<T>]>,
) -> Result<T, BellError> {
    let dim = u1.dim();
    if u2.dim() != dim {
        return Err(BellError::Quantum(QuantumError::DimensionMismatch(
            dim,
            u2.dim(),
        )));
    }
    if i >= dim {
        return Err(BellError::IndexOutOfRange { index: i, dim });
    }
    if j >= dim {
        return Err(BellError::IndexOutOfRange { index: j, dim });
    }
    let standard: Vec<CVector<T>>;
    let basis = match basis {
        Some(b) => {
            if b.len() != dim {
                return Err(BellError::NotOrthonormal);
            }
            let mut gram_defect = T::zero();
            for (x, vx) in b.iter().enumerate() {
                for (y, vy) in b.iter().enumerate() {
                    let want = if x == y { T::one() } else { T::zero() };
                    let got = (vx.adjoint() * vy)[(0, 0)];
                    let d = (got - Complex::new(want, T::zero())).norm_sqr().sqrt();
                    if d > gram_defect {
                        gram_defect = d;
                    }
                }
            }
            if gram_defect > real(1e-10) {
                return Err(BellError::NotOrthonormal);
            }
            b
        }
        None => {
            standard = (0..dim)
                .map(|k| crate::quantum::matrix::basis_vector(dim, k))
                .collect();
            &standard
        }
    };
    let mut quantum_amp = Complex::new(T::zero(), T::zero());
    let mut classical = T::zero();
    for k in 0..dim {
        let t2 = amplitude(u2, basis, i, k);
        let t1 = amplitude(u1, basis, k, j);
        quantum_amp += t2 * t1;
        classical += t2.norm_sqr() * t1.norm_sqr();
    }
    Ok((quantum_amp.norm_sqr() - classical).abs())
}

/// Embeds a two-qubit operator into the `(sector ⊗ sector)` block of
/// the doubled sectored space `H ⊗ H`; the sector must have dimension 2.
pub fn embed_in_sector_pair<T: Scalar>(
    op4: &CMatrix<T>,
    space: &SectoredHilbertSpace,
    sector: usize,
) -> CMatrix<T> {
    assert_eq!(op4.nrows(), 4);
    assert_eq!(
        space.sector_dim(sector),
        2,
        "embedding needs a dim-2 sector"
    );
    let d = space.total_dim();
    let range = space.sector_range(sector);
    // Isometry V: C² → C^d onto the sector basis.
    let mut v = CMatrix::<T>::zeros(d, 2);
    for (col, row) in range.enumerate() {
        v[(row, col)] = Complex::new(T::one(), T::zero());
    }
    let vv = kron(&v, &v);
    &vv * op4 * dagger(&vv)
}

/// Frobenius norm of `(σ_a ⊗ I + I ⊗ σ_a)|ψ⟩` over the Pauli axes —
/// zero exactly for total-spin-zero states.
pub fn total_spin_defect<T: Scalar>(psi: &CVector<T>) -> T {
    let id = CMatrix::<T>::identity(2, 2);
    let mut worst = T::zero();
    for s in pauli::<T>() {
        let op = kron(&s, &id) + kron(&id, &s);
        let n = (&op * psi).norm();
        if n > worst {
            worst = n;
        }
    }
    worst
}
