//! Seeded randomness for all sampling paths.
//!
//! Every stochastic routine in the crate draws from a ChaCha stream
//! seeded through `derive_seed`, so runs are reproducible and parallel
//! work can derive independent per-branch streams from (seed, index).

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quantum::matrix::{dagger, frob_norm, normalize, CMatrix, CVector};
use crate::quantum::space::SectoredHilbertSpace;
use crate::quantum::state::{DensityOperator, Projection, UnitaryMap};
use crate::scalar::{real, Scalar};

/// SplitMix64 step; mixes a seed with a stream index deterministically.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss<T: Scalar, R: Rng>(rng: &mut R) -> T {
    real(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<T: Scalar, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::<T>::from_fn(rows, cols, |_, _| Complex::new(gauss(rng), gauss(rng)))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phase fix
/// `Q ← Q·diag(r_kk/|r_kk|)` that makes the distribution uniform.
pub fn haar_unitary<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> UnitaryMap<T> {
    let g = ginibre::<T, R>(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let norm = d.norm_sqr().sqrt();
        let phase = if norm > T::zero() {
            d / Complex::new(norm, T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    UnitaryMap::trusted(q)
}

/// Block-diagonal unitary acting independently inside each sector.
pub fn sector_unitary<T: Scalar, R: Rng>(
    space: &SectoredHilbertSpace,
    rng: &mut R,
) -> UnitaryMap<T> {
    let d = space.total_dim();
    let mut m = CMatrix::<T>::zeros(d, d);
    for alpha in 0..space.num_sectors() {
        let range = space.sector_range(alpha);
        let block = haar_unitary::<T, R>(range.len(), rng);
        for (bi, i) in range.clone().enumerate() {
            for (bj, j) in range.clone().enumerate() {
                m[(i, j)] = block.matrix()[(bi, bj)];
            }
        }
    }
    UnitaryMap::trusted(m)
}

/// Full-rank random state `GG†/Tr(GG†)`.
pub fn random_density<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> DensityOperator<T> {
    let g = ginibre::<T, R>(dim, dim, rng);
    let w = &g * dagger(&g);
    let trace = crate::quantum::matrix::trace_re(&w);
    DensityOperator::trusted(w / Complex::new(trace, T::zero()))
}

/// Haar-random pure state.
pub fn random_pure<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> DensityOperator<T> {
    let v = CVector::<T>::from_fn(dim, |_, _| Complex::new(gauss(rng), gauss(rng)));
    DensityOperator::pure(&normalize(&v))
}

/// Haar-random unit vector.
pub fn random_state_vector<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> CVector<T> {
    normalize(&CVector::<T>::from_fn(dim, |_, _| {
        Complex::new(gauss(rng), gauss(rng))
    }))
}

/// Random rank-`r` projection: first `r` columns of a Haar unitary.
pub fn random_projection<T: Scalar, R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Projection<T> {
    assert!(rank >= 1 && rank <= dim);
    let u = haar_unitary::<T, R>(dim, rng);
    let v = u.matrix().columns(0, rank).into_owned();
    Projection::trusted(&v * v.adjoint())
}

/// Complete orthogonal projection family: Haar unitary columns split
/// into `parts` contiguous groups (every group nonempty).
pub fn random_complete_family<T: Scalar, R: Rng>(
    dim: usize,
    parts: usize,
    rng: &mut R,
) -> Vec<Projection<T>> {
    assert!(parts >= 1 && parts <= dim);
    let u = haar_unitary::<T, R>(dim, rng);
    // Sizes: dim = parts·q + rem, first `rem` groups one larger.
    let q = dim / parts;
    let rem = dim % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let size = q + usize::from(i < rem);
        let v = u.matrix().columns(start, size).into_owned();
        out.push(Projection::trusted(&v * v.adjoint()));
        start += size;
    }
    out
}

/// Random traceless Hermitian matrix supported on the range of `p`,
/// scaled to Frobenius norm `norm`. Returns `None` when the projection
/// has rank < 2 (no traceless direction lives inside it).
pub fn random_traceless_hermitian_in<T: Scalar, R: Rng>(
    p: &Projection<T>,
    norm: T,
    rng: &mut R,
) -> Option<CMatrix<T>> {
    if p.rank() < 2 {
        return None;
    }
    let dim = p.dim();
    let g = ginibre::<T, R>(dim, dim, rng);
    let h = crate::quantum::matrix::hermitize(&g);
    // Compress into the range of p, then project out the trace.
    let mut inside = p.matrix() * h * p.matrix();
    let r = real::<T>(p.rank() as f64);
    let tr = crate::quantum::matrix::trace_re(&inside);
    inside -= p.matrix() * Complex::new(tr / r, T::zero());
    let current = frob_norm(&inside);
    if current <= real(1e-14) {
        return None;
    }
    Some(inside * Complex::new(norm / current, T::zero()))
}

/// Random CPTP channel with `n_ops` Kraus operators on dimension `dim`:
/// block rows of a Haar random isometry `C^d → C^{kd}` (QR of a tall
/// Ginibre matrix), so `Σ K†K = Q†Q = I` to orthonormalization accuracy
/// independent of any conditioning.
pub fn random_kraus_operators<T: Scalar, R: Rng>(
    dim: usize,
    n_ops: usize,
    rng: &mut R,
) -> Vec<CMatrix<T>> {
    assert!(n_ops >= 1);
    let tall = ginibre::<T, R>(dim * n_ops, dim, rng);
    let q = tall.qr().q();
    (0..n_ops)
        .map(|i| q.rows(i * dim, dim).into_owned())
        .collect()
}

/// Uniform random point on the 2-sphere (measurement direction).
pub fn random_unit_vector3<T: Scalar, R: Rng>(rng: &mut R) -> [T; 3] {
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-6 {
            return [real(x / n), real(y / n), real(z / n)];
        }
    }
}
