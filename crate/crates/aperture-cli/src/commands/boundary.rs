//! `boundary` subcommand: envelope/center reduction, boundary balance,
//! and context-freeness trials for a record projection.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use aperture_core::boundary::{boundary_chain, BoundaryChain, ContextFreeVerdict};
use aperture_core::checks::{central_invariance_sweep, noncentral_counterexample_sweep};
use aperture_core::exchange::MatrixExchange;
use aperture_core::quantum::SectoredHilbertSpace;

use crate::config::BoundaryConfig;
use crate::report::{check, CheckResult, CsvTable};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextFreeReport {
    pub verdict: String,
    pub trials: usize,
    /// Worst deviation seen over all trials (invariant case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    /// Counterexample data when the projection is not context-free.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found_at_trial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixExchange>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryPayload {
    pub chain: BoundaryChain,
    pub context_free: ContextFreeReport,
}

pub fn run(cfg: &BoundaryConfig, seed: u64) -> Result<BoundaryPayload> {
    let algebra = cfg.algebra()?;
    let chain = boundary_chain(&algebra, cfg.n_bulk, cfg.h_bulk)?;
    let space = chain.envelope.sectored_space();
    let q = cfg.record_projection.build(&space, seed)?;
    let verdict =
        aperture_core::boundary::verify_context_free(&q, &space, cfg.trials, seed, cfg.tolerance)?;
    let context_free = match verdict {
        ContextFreeVerdict::Invariant {
            trials,
            max_deviation,
        } => ContextFreeReport {
            verdict: "invariant".into(),
            trials,
            max_deviation: Some(max_deviation),
            deviation: None,
            found_at_trial: None,
            unitary: None,
        },
        ContextFreeVerdict::Counterexample {
            unitary,
            deviation,
            trial,
        } => ContextFreeReport {
            verdict: "counterexample".into(),
            trials: cfg.trials,
            max_deviation: None,
            deviation: Some(deviation),
            found_at_trial: Some(trial),
            unitary: Some(MatrixExchange::from_matrix(unitary.matrix())),
        },
    };
    Ok(BoundaryPayload {
        chain,
        context_free,
    })
}

pub fn csv_tables(payload: &BoundaryPayload) -> Vec<CsvTable> {
    let mut content = String::from("quantity,value\n");
    let chain = &payload.chain;
    let blocks: Vec<String> = chain
        .envelope
        .blocks()
        .iter()
        .map(|b| b.to_string())
        .collect();
    content.push_str(&format!("envelope_blocks,{}\n", blocks.join("|")));
    content.push_str(&format!(
        "central_projections,{}\n",
        chain.center.central_projections
    ));
    content.push_str(&format!("K_b,{}\n", chain.center.k_b));
    content.push_str(&format!("R_b,{}\n", chain.center.r_b));
    content.push_str(&format!("H_b,{}\n", chain.profile.h_b));
    content.push_str(&format!("xi,{}\n", chain.profile.xi));
    content.push_str(&format!("resolution_bulk,{}\n", chain.resolution_bulk));
    content.push_str(&format!(
        "resolution_boundary,{}\n",
        chain.profile.resolution_boundary
    ));
    vec![CsvTable {
        name: "boundary",
        content,
    }]
}

pub fn checks(payload: &BoundaryPayload, seed: u64) -> Vec<CheckResult> {
    let chain = &payload.chain;
    let mut out = Vec::new();
    out.push(check(
        "envelope-blocks",
        chain.envelope.blocks() == [1, 2, 3],
        format!("blocks {:?}", chain.envelope.blocks()),
    ));
    out.push(check(
        "center",
        chain.center.central_projections == 3 && chain.center.k_b == 6 && chain.center.r_b == 3,
        format!(
            "{} projections, K_b = {}, R_b = {}",
            chain.center.central_projections, chain.center.k_b, chain.center.r_b
        ),
    ));
    out.push(check(
        "boundary-balance",
        chain.profile.h_b == 12 && chain.profile.xi == num_rational::Rational64::new(1, 4),
        format!("H_b = {}, xi = {}", chain.profile.h_b, chain.profile.xi),
    ));
    out.push(check(
        "resolution-ratios",
        chain.resolution_bulk == 6 && chain.profile.resolution_boundary == 3,
        format!(
            "bulk {} / boundary {}",
            chain.resolution_bulk, chain.profile.resolution_boundary
        ),
    ));

    let space = SectoredHilbertSpace::new(vec![1, 2, 3]);
    let invariance = central_invariance_sweep(&space, 1000, seed);
    out.push(check(
        "central-records-invariant",
        invariance.worst <= 1e-12,
        format!(
            "worst deviation {:e} over {} sector-wise unitaries",
            invariance.worst, invariance.cases
        ),
    ));
    let hunt = noncentral_counterexample_sweep(&space, 100, 10, seed);
    out.push(check(
        "noncentral-counterexamples",
        hunt.found == hunt.cases && hunt.worst_trial < 10,
        format!(
            "{}/{} moved within 10 trials (worst trial index {})",
            hunt.found, hunt.cases, hunt.worst_trial
        ),
    ));
    out
}

pub fn summary(payload: &BoundaryPayload) -> String {
    format!(
        "blocks {:?}; H_b = {}; xi = {}; record projection: {}",
        payload.chain.envelope.blocks(),
        payload.chain.profile.h_b,
        payload.chain.profile.xi,
        payload.context_free.verdict
    )
}
