//! `search` subcommand: structural balance search plus representational
//! balance solutions.

use anyhow::Result;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use aperture_core::algebra::{AlgebraFactor, CandidateAlgebra, DivisionRing};
use aperture_core::search::{
    representational_solutions, structural_solutions, AnomalyRule, RepBalanceSolution,
    SearchBounds, SearchCertificate,
};

use crate::config::SearchConfig;
use crate::report::{check, CheckResult, CsvTable};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepPayload {
    pub solutions: Vec<RepBalanceSolution>,
    pub anomaly_rule: AnomalyRule,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchPayload {
    pub certificate: SearchCertificate,
    pub representational: RepPayload,
}

pub fn run(cfg: &SearchConfig) -> Result<SearchPayload> {
    let bounds = SearchBounds::new(cfg.max_disc, cfg.max_summands)?;
    let certificate = structural_solutions(&bounds);
    let solutions = representational_solutions(
        cfg.representational.disc,
        cfg.representational.gen_size,
        cfg.representational.n_min..=cfg.representational.n_max,
    );
    Ok(SearchPayload {
        certificate,
        representational: RepPayload {
            solutions,
            anomaly_rule: AnomalyRule::default(),
        },
    })
}

pub fn csv_tables(payload: &SearchPayload) -> Vec<CsvTable> {
    vec![CsvTable {
        name: "solutions",
        content: payload.certificate.solutions_csv(),
    }]
}

/// The expected winner `C ⊕ H ⊕ M3(C)`.
pub fn winning_candidate() -> CandidateAlgebra {
    CandidateAlgebra::new(vec![
        AlgebraFactor::new(DivisionRing::C, 1),
        AlgebraFactor::new(DivisionRing::H, 1),
        AlgebraFactor::new(DivisionRing::C, 3),
    ])
    .expect("nonempty")
}

pub fn checks(payload: &SearchPayload) -> Vec<CheckResult> {
    let cert = &payload.certificate;
    let mut out = Vec::new();

    let at_minimum: Vec<_> = cert.solutions.iter().filter(|s| s.disc == 144).collect();
    let unique_winner = at_minimum.len() == 1
        && at_minimum[0].candidate == winning_candidate()
        && cert.minimal_is_unique
        && cert.minimal_solution.as_ref() == Some(&winning_candidate());
    out.push(check(
        "unique-solution-at-144",
        unique_winner,
        format!(
            "{} solution(s) at disc 144; minimal = {:?}",
            at_minimum.len(),
            cert.minimal_solution.as_ref().map(|c| c.to_string())
        ),
    ));

    let below = cert.solutions.iter().filter(|s| s.disc < 144).count();
    out.push(check(
        "no-solution-below-144",
        below == 0,
        format!("{below} solution(s) below 144"),
    ));

    out.push(check(
        "enumeration-scale",
        cert.candidates_enumerated >= 1_000_000,
        format!("{} candidates examined", cert.candidates_enumerated),
    ));

    let profile_ok = at_minimum.first().is_some_and(|s| {
        s.profile.k == 24
            && s.profile.r == 6
            && s.profile.g == 11
            && s.profile.a == 2
            && s.sym == Rational64::from_integer(144)
    });
    out.push(check(
        "structural-integers",
        profile_ok,
        "(K, R, G, A) = (24, 6, 11, 2) with (G + A/2)^2 = 144".to_string(),
    ));

    let reps = &payload.representational.solutions;
    let four = reps
        .iter()
        .any(|s| s.n == 4 && s.n_gen == 3 && s.h == 48 && !s.excluded_by_anomaly);
    let six = reps
        .iter()
        .any(|s| s.n == 6 && s.n_gen == 6 && s.h == 96 && s.excluded_by_anomaly);
    let no_odd = reps.iter().all(|s| s.n % 2 == 0);
    out.push(check(
        "representational-balance",
        four && six && no_odd,
        format!(
            "{} solutions; n=4 kept, n>=6 excluded, no odd n",
            reps.len()
        ),
    ));

    out
}

pub fn summary(payload: &SearchPayload) -> String {
    format!(
        "examined {} candidates; {} balanced; minimal = {}",
        payload.certificate.candidates_enumerated,
        payload.certificate.solutions.len(),
        payload
            .certificate
            .minimal_solution
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into())
    )
}
