//! Experiment configuration schemas. Configs are JSON with a top-level
//! `schema_version`; unknown fields are rejected so typos fail loudly.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use aperture_core::algebra::{AlgebraFactor, CandidateAlgebra, DivisionRing};
use aperture_core::exchange::MatrixExchange;
use aperture_core::quantum::{DensityOperator, Projection, SectoredHilbertSpace, UnitaryMap};
use aperture_core::random::{derive_seed, rng_from};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version_default() -> u32 {
    SCHEMA_VERSION
}

/// Loads a config of type `C` from a JSON file, or falls back to the
/// default when no path is given.
pub fn load_or_default<C>(path: Option<&std::path::Path>) -> Result<C>
where
    C: Default + serde::de::DeserializeOwned,
{
    match path {
        None => Ok(C::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            let cfg = serde_json::from_str(&text)
                .with_context(|| format!("config schema error in {}", p.display()))?;
            Ok(cfg)
        }
    }
}

// ── search ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
    #[serde(default = "default_max_disc")]
    pub max_disc: u64,
    #[serde(default = "default_max_summands")]
    pub max_summands: usize,
    #[serde(default)]
    pub representational: RepConfig,
}

fn default_max_disc() -> u64 {
    144
}
fn default_max_summands() -> usize {
    12
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            max_disc: default_max_disc(),
            max_summands: default_max_summands(),
            representational: RepConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepConfig {
    #[serde(default = "default_rep_disc")]
    pub disc: u64,
    #[serde(default = "default_gen_size")]
    pub gen_size: u64,
    #[serde(default = "default_n_min")]
    pub n_min: u32,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
}

fn default_rep_disc() -> u64 {
    144
}
fn default_gen_size() -> u64 {
    16
}
fn default_n_min() -> u32 {
    2
}
fn default_n_max() -> u32 {
    12
}

impl Default for RepConfig {
    fn default() -> Self {
        Self {
            disc: default_rep_disc(),
            gen_size: default_gen_size(),
            n_min: default_n_min(),
            n_max: default_n_max(),
        }
    }
}

// ── boundary ─────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub ring: String,
    pub dim: u32,
}

impl FactorSpec {
    pub fn to_factor(&self) -> Result<AlgebraFactor> {
        let ring = match self.ring.as_str() {
            "R" => DivisionRing::R,
            "C" => DivisionRing::C,
            "H" => DivisionRing::H,
            other => bail!("factors[].ring: unknown division ring {other:?}"),
        };
        if self.dim < 1 {
            bail!("factors[].dim must be at least 1");
        }
        Ok(AlgebraFactor::new(ring, self.dim))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
    /// Bulk algebra as a list of simple factors.
    #[serde(default = "default_factors")]
    pub factors: Vec<FactorSpec>,
    #[serde(default = "default_n_bulk")]
    pub n_bulk: u32,
    #[serde(default = "default_h_bulk")]
    pub h_bulk: u64,
    /// Record observable to test for context-freeness.
    #[serde(default)]
    pub record_projection: ProjectionSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_counterexample_tol")]
    pub tolerance: f64,
}

fn default_factors() -> Vec<FactorSpec> {
    vec![
        FactorSpec {
            ring: "C".into(),
            dim: 1,
        },
        FactorSpec {
            ring: "H".into(),
            dim: 1,
        },
        FactorSpec {
            ring: "C".into(),
            dim: 3,
        },
    ]
}
fn default_n_bulk() -> u32 {
    4
}
fn default_h_bulk() -> u64 {
    48
}
fn default_trials() -> usize {
    1000
}
fn default_counterexample_tol() -> f64 {
    1e-9
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            factors: default_factors(),
            n_bulk: default_n_bulk(),
            h_bulk: default_h_bulk(),
            record_projection: ProjectionSpec::default(),
            trials: default_trials(),
            tolerance: default_counterexample_tol(),
        }
    }
}

impl BoundaryConfig {
    pub fn algebra(&self) -> Result<CandidateAlgebra> {
        let factors = self
            .factors
            .iter()
            .map(|f| f.to_factor())
            .collect::<Result<Vec<_>>>()?;
        CandidateAlgebra::new(factors).context("factors: candidate algebra must be nonempty")
    }
}

/// How to build the record projection under test.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ProjectionSpec {
    /// Sum of full sector projections (0-based sector indices).
    #[serde(rename = "sectors")]
    Sectors { sectors: Vec<usize> },
    /// Seeded random rank-one projection strictly inside one sector.
    #[serde(rename = "rank_one_in_sector")]
    RankOneInSector { sector: usize },
    /// Explicit matrix in exchange format.
    #[serde(rename = "matrix")]
    Matrix { matrix: MatrixExchange },
}

impl Default for ProjectionSpec {
    fn default() -> Self {
        ProjectionSpec::Sectors { sectors: vec![0] }
    }
}

impl ProjectionSpec {
    pub fn build(&self, space: &SectoredHilbertSpace, seed: u64) -> Result<Projection<f64>> {
        match self {
            ProjectionSpec::Sectors { sectors } => {
                for &s in sectors {
                    if s >= space.num_sectors() {
                        bail!("record_projection.sectors: index {s} out of range");
                    }
                }
                Ok(space.subset_projection(sectors))
            }
            ProjectionSpec::RankOneInSector { sector } => {
                if *sector >= space.num_sectors() {
                    bail!("record_projection.sector: index {sector} out of range");
                }
                let range = space.sector_range(*sector);
                let mut rng = rng_from(derive_seed(seed, 0x5ec7));
                let inner =
                    aperture_core::random::random_state_vector::<f64, _>(range.len(), &mut rng);
                let mut v = aperture_core::quantum::CVector::<f64>::zeros(space.total_dim());
                for (j, idx) in range.enumerate() {
                    v[idx] = inner[j];
                }
                Ok(Projection::rank_one(&v))
            }
            ProjectionSpec::Matrix { matrix } => {
                let m = matrix
                    .to_matrix::<f64>()
                    .context("record_projection.matrix")?;
                Projection::new(m).context("record_projection.matrix is not a projection")
            }
        }
    }
}

// ── record ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum UnitarySpec {
    #[serde(rename = "identity")]
    Identity,
    /// Swap the leading `min(r_a, r_b)` basis vectors of two sectors.
    #[serde(rename = "sector_swap")]
    SectorSwap { a: usize, b: usize },
    /// Haar-random unitary; uses the run seed unless one is given.
    #[serde(rename = "seeded_haar")]
    SeededHaar {
        #[serde(default)]
        seed: Option<u64>,
    },
    #[serde(rename = "matrix")]
    Matrix { matrix: MatrixExchange },
}

impl UnitarySpec {
    pub fn build(
        &self,
        space: &SectoredHilbertSpace,
        run_seed: u64,
        stream: u64,
    ) -> Result<UnitaryMap<f64>> {
        let dim = space.total_dim();
        Ok(match self {
            UnitarySpec::Identity => UnitaryMap::identity(dim),
            UnitarySpec::SectorSwap { a, b } => {
                if *a >= space.num_sectors() || *b >= space.num_sectors() {
                    bail!("sector_swap: sector index out of range");
                }
                let mut perm: Vec<usize> = (0..dim).collect();
                for (i, j) in space.sector_range(*a).zip(space.sector_range(*b)) {
                    perm.swap(i, j);
                }
                UnitaryMap::permutation(&perm)
            }
            UnitarySpec::SeededHaar { seed } => {
                let s = seed.unwrap_or_else(|| derive_seed(run_seed, stream));
                let mut rng = rng_from(s);
                aperture_core::random::haar_unitary(dim, &mut rng)
            }
            UnitarySpec::Matrix { matrix } => {
                let m = matrix.to_matrix::<f64>().context("unitary matrix")?;
                UnitaryMap::new(m).context("matrix is not unitary")?
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum StateSpec {
    #[serde(rename = "maximally_mixed")]
    MaximallyMixed,
    #[serde(rename = "pure_basis")]
    PureBasis { index: usize },
    #[serde(rename = "matrix")]
    Matrix { matrix: MatrixExchange },
}

impl StateSpec {
    pub fn build(&self, dim: usize) -> Result<DensityOperator<f64>> {
        Ok(match self {
            StateSpec::MaximallyMixed => DensityOperator::maximally_mixed(dim),
            StateSpec::PureBasis { index } => {
                if *index >= dim {
                    bail!("initial_state.index {index} out of range for dimension {dim}");
                }
                DensityOperator::pure_basis(dim, *index)
            }
            StateSpec::Matrix { matrix } => {
                let m = matrix.to_matrix::<f64>().context("initial_state.matrix")?;
                DensityOperator::new(m).context("initial_state is not a density operator")?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordConfig {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
    #[serde(default = "default_sector_dims")]
    pub sector_dims: Vec<usize>,
    /// Template applied to every step (instantiated once).
    #[serde(default = "default_unitary")]
    pub unitary: UnitarySpec,
    /// Per-step override; length must equal `steps` when present.
    #[serde(default)]
    pub per_step: Option<Vec<UnitarySpec>>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_state")]
    pub initial_state: StateSpec,
    #[serde(default = "default_mode")]
    pub mode: RunMode,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_witness_depth")]
    pub witness_depth: usize,
    #[serde(default = "default_witness_tol")]
    pub tolerance: f64,
}

fn default_sector_dims() -> Vec<usize> {
    vec![1, 2, 3]
}
fn default_unitary() -> UnitarySpec {
    UnitarySpec::SeededHaar { seed: None }
}
fn default_steps() -> usize {
    3
}
fn default_state() -> StateSpec {
    StateSpec::MaximallyMixed
}
fn default_mode() -> RunMode {
    RunMode::Exact
}
fn default_samples() -> usize {
    100_000
}
fn default_witness_depth() -> usize {
    3
}
fn default_witness_tol() -> f64 {
    aperture_core::record::WITNESS_TOL
}

impl Default for RecordConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            sector_dims: default_sector_dims(),
            unitary: default_unitary(),
            per_step: None,
            steps: default_steps(),
            initial_state: default_state(),
            mode: default_mode(),
            samples: default_samples(),
            witness_depth: default_witness_depth(),
            tolerance: default_witness_tol(),
        }
    }
}

impl RecordConfig {
    pub fn space(&self) -> Result<SectoredHilbertSpace> {
        if self.sector_dims.is_empty() || self.sector_dims.contains(&0) {
            bail!("sector_dims must be nonempty with positive entries");
        }
        Ok(SectoredHilbertSpace::new(self.sector_dims.clone()))
    }

    pub fn unitaries(
        &self,
        space: &SectoredHilbertSpace,
        run_seed: u64,
    ) -> Result<Vec<UnitaryMap<f64>>> {
        if self.steps == 0 {
            bail!("steps must be at least 1");
        }
        match &self.per_step {
            Some(list) => {
                if list.len() != self.steps {
                    bail!(
                        "per_step has {} entries but steps is {}",
                        list.len(),
                        self.steps
                    );
                }
                list.iter()
                    .enumerate()
                    .map(|(k, spec)| spec.build(space, run_seed, k as u64))
                    .collect()
            }
            None => {
                let u = self.unitary.build(space, run_seed, 0)?;
                Ok(vec![u; self.steps])
            }
        }
    }
}

// ── bell ─────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for ChshAngles {
    fn default() -> Self {
        Self {
            a: 0.0,
            a_prime: std::f64::consts::FRAC_PI_2,
            b: std::f64::consts::FRAC_PI_4,
            b_prime: std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellConfig {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
    /// Number of θ samples in the correlation table.
    #[serde(default = "default_correlation_points")]
    pub correlation_points: usize,
    #[serde(default)]
    pub chsh: ChshAngles,
    #[serde(default = "default_scan_configs")]
    pub scan_configs: usize,
    #[serde(default = "default_channels")]
    pub no_signaling_channels: usize,
    #[serde(default = "default_states")]
    pub no_signaling_states: usize,
    #[serde(default = "default_interference_dim")]
    pub interference_dim: usize,
}

fn default_correlation_points() -> usize {
    25
}
fn default_scan_configs() -> usize {
    10_000
}
fn default_channels() -> usize {
    50
}
fn default_states() -> usize {
    20
}
fn default_interference_dim() -> usize {
    6
}

impl Default for BellConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            correlation_points: default_correlation_points(),
            chsh: ChshAngles::default(),
            scan_configs: default_scan_configs(),
            no_signaling_channels: default_channels(),
            no_signaling_states: default_states(),
            interference_dim: default_interference_dim(),
        }
    }
}

// ── trace ────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    #[serde(default = "schema_version_default")]
    pub schema_version: u32,
}
