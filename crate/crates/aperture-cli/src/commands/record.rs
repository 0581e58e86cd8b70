//! `record` subcommand: exact or sampled record-process runs, Markov
//! analysis, witness search, and transition-effect spectra.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use aperture_core::record::{
    joint_distribution, markov_check, sample_records, scalar_reset_check, transition_effect,
    witness_search, InstrumentConfig, MarkovReport, RecordHistory, Witness,
};

use crate::config::{RecordConfig, RunMode};
use crate::report::{check, CheckResult, CsvTable};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReport {
    pub step: usize,
    pub history_a: String,
    pub history_b: String,
    pub sector: usize,
    pub next_sector: usize,
    pub conditional_a: f64,
    pub conditional_b: f64,
    pub gap: f64,
    pub state_distance: f64,
}

impl From<&Witness<f64>> for WitnessReport {
    fn from(w: &Witness<f64>) -> Self {
        Self {
            step: w.step,
            history_a: w.history_a.to_string(),
            history_b: w.history_b.to_string(),
            sector: w.alpha + 1,
            next_sector: w.beta + 1,
            conditional_a: w.conditional_a,
            conditional_b: w.conditional_b,
            gap: w.gap,
            state_distance: w.state_distance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkovSummary {
    pub markovian: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_pair: Option<(String, String)>,
}

impl From<&MarkovReport<f64>> for MarkovSummary {
    fn from(r: &MarkovReport<f64>) -> Self {
        Self {
            markovian: r.markovian,
            worst_gap: r.worst.as_ref().map(|w| w.gap),
            worst_pair: r
                .worst
                .as_ref()
                .map(|w| (w.history_a.to_string(), w.history_b.to_string())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordPayload {
    pub mode: RunMode,
    pub steps: usize,
    pub sector_dims: Vec<usize>,
    /// Exact joint distribution (exact mode), keyed by 1-based history.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pruned_mass: Option<f64>,
    /// Empirical frequencies (sample mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub markov: Option<MarkovSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    /// Per-exit markovian-exit verdicts and constants.
    pub scalar_exits: BTreeMap<String, bool>,
    /// Transition-effect spectra keyed "alpha->beta" (1-based).
    pub effect_spectra: BTreeMap<String, Vec<f64>>,
}

fn history_map(map: &BTreeMap<RecordHistory, f64>) -> BTreeMap<String, f64> {
    map.iter().map(|(h, &p)| (h.to_string(), p)).collect()
}

pub fn run(cfg: &RecordConfig, seed: u64) -> Result<RecordPayload> {
    let space = cfg.space()?;
    let unitaries = cfg.unitaries(&space, seed)?;
    let initial = cfg.initial_state.build(space.total_dim())?;
    let instrument = InstrumentConfig::new(space.clone(), unitaries.clone(), initial)?;

    let mut payload = RecordPayload {
        mode: cfg.mode,
        steps: cfg.steps,
        sector_dims: cfg.sector_dims.clone(),
        distribution: None,
        pruned_mass: None,
        empirical: None,
        samples: None,
        markov: None,
        witness: None,
        scalar_exits: BTreeMap::new(),
        effect_spectra: BTreeMap::new(),
    };

    match cfg.mode {
        RunMode::Exact => {
            let dist = joint_distribution(&instrument)?;
            payload.pruned_mass = Some(dist.pruned_mass());
            payload.distribution = Some(history_map(&dist.probabilities));
            if dist.steps >= 3 {
                let report = markov_check(&dist, cfg.tolerance)?;
                payload.markov = Some(MarkovSummary::from(&report));
            }
            if cfg.witness_depth >= 2 {
                let witness = witness_search(&instrument, cfg.witness_depth, cfg.tolerance)?;
                payload.witness = witness.as_ref().map(WitnessReport::from);
            }
        }
        RunMode::Sample => {
            let samples = sample_records(&instrument, cfg.samples, seed);
            payload.samples = Some(cfg.samples);
            payload.empirical = Some(history_map(
                &aperture_core::record::empirical_distribution::<f64>(&samples),
            ));
        }
    }

    // Spectra and scalar-exit verdicts for the first-step unitary.
    let u = &unitaries[0];
    for alpha in 0..space.num_sectors() {
        let reset = scalar_reset_check(u, alpha, &space, cfg.tolerance);
        payload
            .scalar_exits
            .insert(format!("{}", alpha + 1), reset.markovian_exit);
        for beta in 0..space.num_sectors() {
            let e = transition_effect(u, alpha, beta, &space);
            payload.effect_spectra.insert(
                format!("{}->{}", alpha + 1, beta + 1),
                e.sector_spectrum(&space),
            );
        }
    }
    Ok(payload)
}

pub fn csv_tables(payload: &RecordPayload) -> Vec<CsvTable> {
    let mut content = String::from("history,probability,source\n");
    if let Some(dist) = &payload.distribution {
        for (h, p) in dist {
            content.push_str(&format!("\"{h}\",{p},exact\n"));
        }
    }
    if let Some(freq) = &payload.empirical {
        for (h, p) in freq {
            content.push_str(&format!("\"{h}\",{p},empirical\n"));
        }
    }
    vec![CsvTable {
        name: "histories",
        content,
    }]
}

pub fn checks(payload: &RecordPayload) -> Vec<CheckResult> {
    let mut out = Vec::new();
    match payload.mode {
        RunMode::Exact => {
            let total: f64 = payload
                .distribution
                .as_ref()
                .map(|d| d.values().sum())
                .unwrap_or(0.0);
            let mass = total + payload.pruned_mass.unwrap_or(0.0);
            out.push(check(
                "probability-conservation",
                (mass - 1.0).abs() <= 1e-9,
                format!("total + pruned mass = {mass}"),
            ));
            if let (Some(markov), Some(witness)) = (&payload.markov, &payload.witness) {
                out.push(check(
                    "witness-markov-consistency",
                    !markov.markovian && witness.gap > 1e-3,
                    format!(
                        "witness gap {:e}; exact-tree markovian = {}",
                        witness.gap, markov.markovian
                    ),
                ));
            }
        }
        RunMode::Sample => {
            let total: f64 = payload
                .empirical
                .as_ref()
                .map(|d| d.values().sum())
                .unwrap_or(0.0);
            out.push(check(
                "frequency-normalization",
                (total - 1.0).abs() <= 1e-9,
                format!("frequencies sum to {total}"),
            ));
        }
    }
    out
}

pub fn summary(payload: &RecordPayload) -> String {
    let witness = match &payload.witness {
        Some(w) => format!(
            "witness at step {} (gap {:.3e}, {} vs {})",
            w.step, w.gap, w.history_a, w.history_b
        ),
        None => "no witness".to_string(),
    };
    match payload.mode {
        RunMode::Exact => format!(
            "exact run over {} histories; {}",
            payload.distribution.as_ref().map(|d| d.len()).unwrap_or(0),
            witness
        ),
        RunMode::Sample => format!(
            "sampled {} draws over {} observed histories",
            payload.samples.unwrap_or(0),
            payload.empirical.as_ref().map(|d| d.len()).unwrap_or(0)
        ),
    }
}
