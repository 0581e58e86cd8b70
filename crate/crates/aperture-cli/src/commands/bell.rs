//! `bell` subcommand: correlation table, CHSH canonical value and scan,
//! no-signaling sweep, interference deviations.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use aperture_core::bell::{
    chsh_planar_scan_rows, chsh_value, correlation, correlation_closed_form,
    interference_deviation, no_signaling_deviation, singlet_state, ChshConfig, ChshScan,
    ChshScanRow, KrausChannel, MeasurementSetting,
};
use aperture_core::random::{
    derive_seed, haar_unitary, random_density, random_kraus_operators, rng_from,
};

use crate::config::BellConfig;
use crate::report::{check, CheckResult, CsvTable};

const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub theta: f64,
    pub born: f64,
    pub closed_form: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterferenceSummary {
    pub diagonal_max: f64,
    pub balanced_deviation: f64,
    pub generic_max: f64,
    pub generic_argmax: (usize, usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BellPayload {
    pub correlation_table: Vec<CorrelationRow>,
    pub chsh_value: f64,
    pub tsirelson_gap: f64,
    pub scan: ChshScan<f64>,
    pub no_signaling_max_deviation: f64,
    pub no_signaling_cases: usize,
    pub interference: InterferenceSummary,
    #[serde(skip)]
    pub scan_rows: Vec<ChshScanRow<f64>>,
}

pub fn run(cfg: &BellConfig, seed: u64) -> Result<BellPayload> {
    // Correlation table over one period of the relative angle.
    let mut correlation_table = Vec::with_capacity(cfg.correlation_points);
    let a = MeasurementSetting::<f64>::planar(0.0);
    for k in 0..cfg.correlation_points {
        let theta =
            2.0 * std::f64::consts::PI * (k as f64) / (cfg.correlation_points.max(1) as f64);
        let b = MeasurementSetting::planar(theta);
        correlation_table.push(CorrelationRow {
            theta,
            born: correlation(&a, &b)?,
            closed_form: correlation_closed_form(&a, &b),
        });
    }

    let chsh_cfg = ChshConfig {
        a: MeasurementSetting::planar(cfg.chsh.a),
        a_prime: MeasurementSetting::planar(cfg.chsh.a_prime),
        b: MeasurementSetting::planar(cfg.chsh.b),
        b_prime: MeasurementSetting::planar(cfg.chsh.b_prime),
        state: singlet_state(),
    };
    let chsh = chsh_value(&chsh_cfg)?;

    let scan_rows = chsh_planar_scan_rows::<f64>(cfg.scan_configs, seed);
    let mut scan = ChshScan {
        configs: cfg.scan_configs,
        max_value: 0.0,
        max_angles: [0.0; 4],
    };
    for row in &scan_rows {
        if row.value > scan.max_value {
            scan.max_value = row.value;
            scan.max_angles = row.angles;
        }
    }

    let mut worst_dev = 0.0f64;
    let mut cases = 0;
    for c in 0..cfg.no_signaling_channels {
        let mut rng = rng_from(derive_seed(seed, 10_000 + c as u64));
        let channel = KrausChannel::new(random_kraus_operators::<f64, _>(2, 1 + c % 4, &mut rng))
            .expect("whitened Kraus family is trace-preserving");
        for _ in 0..cfg.no_signaling_states {
            let rho = random_density::<f64, _>(4, &mut rng);
            worst_dev = worst_dev.max(no_signaling_deviation(&rho, &channel)?);
            cases += 1;
        }
    }

    let interference = interference_summary(cfg, seed)?;

    Ok(BellPayload {
        correlation_table,
        chsh_value: chsh,
        tsirelson_gap: (chsh - TSIRELSON).abs(),
        scan,
        no_signaling_max_deviation: worst_dev,
        no_signaling_cases: cases,
        interference,
        scan_rows,
    })
}

fn interference_summary(cfg: &BellConfig, seed: u64) -> Result<InterferenceSummary> {
    use aperture_core::quantum::{CMatrix, CVector, UnitaryMap};

    // Diagonal case: phases only, no cross terms.
    let phases: Vec<aperture_core::Complex64> = (0..3)
        .map(|k| aperture_core::Complex64::from_polar(1.0, 0.7 * (k as f64 + 1.0)))
        .collect();
    let diag = UnitaryMap::new(CMatrix::<f64>::from_diagonal(&CVector::from_vec(phases)))?;
    let mut diagonal_max = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            diagonal_max = diagonal_max.max(interference_deviation(&diag, &diag, i, j, None)?);
        }
    }

    // Balanced two-level case: deviation exactly 1/2 at (0, 0).
    let w = 1.0 / 2.0_f64.sqrt();
    let balanced = UnitaryMap::new(CMatrix::<f64>::from_row_slice(
        2,
        2,
        &[
            aperture_core::Complex64::new(w, 0.0),
            aperture_core::Complex64::new(w, 0.0),
            aperture_core::Complex64::new(w, 0.0),
            aperture_core::Complex64::new(-w, 0.0),
        ],
    ))?;
    let balanced_deviation = interference_deviation(&balanced, &balanced, 0, 0, None)?;

    // Generic seeded unitary at the configured dimension.
    let mut rng = rng_from(derive_seed(seed, 20_000));
    let u = haar_unitary::<f64, _>(cfg.interference_dim, &mut rng);
    let mut generic_max = 0.0f64;
    let mut generic_argmax = (0, 0);
    for i in 0..cfg.interference_dim {
        for j in 0..cfg.interference_dim {
            let dev = interference_deviation(&u, &u, i, j, None)?;
            if dev > generic_max {
                generic_max = dev;
                generic_argmax = (i, j);
            }
        }
    }

    Ok(InterferenceSummary {
        diagonal_max,
        balanced_deviation,
        generic_max,
        generic_argmax,
    })
}

pub fn csv_tables(payload: &BellPayload) -> Vec<CsvTable> {
    let mut correlation = String::from("theta,correlation_born,correlation_closed_form\n");
    for row in &payload.correlation_table {
        correlation.push_str(&format!("{},{},{}\n", row.theta, row.born, row.closed_form));
    }
    let mut scan = String::from("theta_a,theta_a_prime,theta_b,theta_b_prime,chsh\n");
    for row in &payload.scan_rows {
        scan.push_str(&format!(
            "{},{},{},{},{}\n",
            row.angles[0], row.angles[1], row.angles[2], row.angles[3], row.value
        ));
    }
    vec![
        CsvTable {
            name: "correlation",
            content: correlation,
        },
        CsvTable {
            name: "chsh_scan",
            content: scan,
        },
    ]
}

pub fn checks(payload: &BellPayload) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check(
        "chsh-tsirelson",
        payload.tsirelson_gap <= 1e-12,
        format!(
            "|S| = {} (gap {:e})",
            payload.chsh_value, payload.tsirelson_gap
        ),
    ));
    out.push(check(
        "scan-ceiling",
        payload.scan.max_value <= TSIRELSON + 1e-9,
        format!(
            "scan max {} over {} configurations",
            payload.scan.max_value, payload.scan.configs
        ),
    ));
    let corr_worst = payload
        .correlation_table
        .iter()
        .map(|r| (r.born - r.closed_form).abs())
        .fold(0.0f64, f64::max);
    out.push(check(
        "correlation-closed-form",
        corr_worst <= 1e-12,
        format!("worst Born-vs-closed-form gap {corr_worst:e}"),
    ));
    out.push(check(
        "no-signaling",
        payload.no_signaling_max_deviation < 1e-12,
        format!(
            "max reduced-state deviation {:e} over {} cases",
            payload.no_signaling_max_deviation, payload.no_signaling_cases
        ),
    ));
    out.push(check(
        "interference-diagonal",
        payload.interference.diagonal_max <= 1e-15,
        format!("diagonal deviation {:e}", payload.interference.diagonal_max),
    ));
    out.push(check(
        "interference-balanced",
        (payload.interference.balanced_deviation - 0.5).abs() <= 1e-12,
        format!(
            "balanced two-level deviation {}",
            payload.interference.balanced_deviation
        ),
    ));
    out.push(check(
        "interference-generic",
        payload.interference.generic_max > 1e-3,
        format!(
            "max deviation {:e} at {:?}",
            payload.interference.generic_max, payload.interference.generic_argmax
        ),
    ));
    out
}

pub fn summary(payload: &BellPayload) -> String {
    format!(
        "CHSH = {:.12} (gap to 2√2: {:.2e}); scan max {:.12}; no-signaling max {:.2e}",
        payload.chsh_value,
        payload.tsirelson_gap,
        payload.scan.max_value,
        payload.no_signaling_max_deviation
    )
}
