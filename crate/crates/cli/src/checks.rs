//! `check-models`: fits the analytic duration models to analyzed preset
//! curves and prints a pass/fail table.
//!
//! Delay scenarios must follow the affine law with a slope equal to the
//! number of one-way trips on the critical path (4 while both flights fit
//! the initial window; each extra transmission round adds 2) at
//! R^2 > 0.999; rate scenarios the hyperbola m/x + c at R^2 > 0.99. Slope
//! expectations assume the default transport and flight configuration.

use std::collections::BTreeMap;
use std::path::Path;

use pqshake_core::fit::{fit_affine, fit_hyperbola};
use pqshake_core::handshake::FlightProfile;
use pqshake_core::kem::Catalog;
use pqshake_core::tcp::{segment_count, TcpConfig};

use crate::analyze::{parse_analyzed, sorted_files, AnalyzeError};

pub const DELAY_SLOPE_TOLERANCE: f64 = 0.1;
pub const DELAY_R2_MIN: f64 = 0.999;
pub const RATE_R2_MIN: f64 = 0.99;

/// Transmission rounds for a flight of `segments` under per-ACK slow start
/// from an initial window of `initcwnd` segments (capacity doubles per
/// round: w, 2w, 4w, ...).
fn transmission_rounds(segments: usize, initcwnd: usize) -> usize {
    if segments == 0 {
        return 0;
    }
    let mut capacity = initcwnd;
    let mut reachable = initcwnd;
    let mut rounds = 1;
    while reachable < segments {
        capacity *= 2;
        reachable += capacity;
        rounds += 1;
    }
    rounds
}

/// One-way-trip count of the critical path: SYN + SYN-ACK + one trip per
/// flight plus a round trip for every extra transmission round.
pub fn expected_delay_slope(algorithm: &str) -> f64 {
    let catalog = Catalog::shipped();
    let Ok(kem) = catalog.resolve(algorithm) else {
        return 4.0;
    };
    let fp = FlightProfile::default();
    let tcp = TcpConfig::default();
    let ch_rounds = transmission_rounds(
        segment_count(fp.client_hello_base_bytes + kem.pk_bytes, tcp.mss_bytes),
        tcp.initcwnd_segments,
    );
    let flight_rounds = transmission_rounds(
        segment_count(fp.server_flight_base_bytes + kem.ct_bytes, tcp.mss_bytes),
        tcp.initcwnd_segments,
    );
    (4 + 2 * (ch_rounds - 1) + 2 * (flight_rounds - 1)) as f64
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub scenario: String,
    pub algorithm: String,
    pub description: String,
    pub passed: bool,
}

/// Median curves keyed by (scenario, x-axis name, algorithm).
type Curves = BTreeMap<(String, String, String), Vec<(f64, f64)>>;

/// Collects `(x, median)` curves per (scenario, algorithm) from an analyzed
/// tree. Cells without a median (all failures) are skipped.
fn collect_curves(analyzed_root: &Path) -> Result<Curves, AnalyzeError> {
    let mut curves: Curves = BTreeMap::new();
    for path in sorted_files(analyzed_root)? {
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let rel = path.strip_prefix(analyzed_root).expect("file outside root");
        let components: Vec<String> = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        if components.len() < 3 {
            continue;
        }
        let scenario = components[0].clone();
        let Some((x_name, x_value)) = components[1]
            .rsplit_once('_')
            .and_then(|(n, v)| v.parse::<f64>().ok().map(|v| (n.to_string(), v)))
        else {
            continue;
        };
        let algorithm = components
            .last()
            .and_then(|f| f.strip_suffix(".csv"))
            .unwrap_or_default()
            .to_string();
        let cell = parse_analyzed(&path, &std::fs::read_to_string(&path)?)?;
        if let Some(median) = cell.median {
            curves
                .entry((scenario, x_name, algorithm))
                .or_default()
                .push((x_value, median));
        }
    }
    Ok(curves)
}

/// Runs all model checks under `analyzed_root`. Returns the report lines;
/// overall success is the conjunction.
pub fn check_models(analyzed_root: &Path) -> Result<Vec<CheckLine>, AnalyzeError> {
    if !analyzed_root.is_dir() {
        return Err(AnalyzeError::MissingInput(analyzed_root.to_path_buf()));
    }
    let curves = collect_curves(analyzed_root)?;
    let mut lines = Vec::new();
    for ((scenario, x_name, algorithm), mut points) in curves {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        match x_name.as_str() {
            "delay" => {
                let expected = expected_delay_slope(&algorithm);
                let line = match fit_affine(&points) {
                    Ok(fit) => {
                        let slope_ok = (fit.slope - expected).abs() <= DELAY_SLOPE_TOLERANCE;
                        let r2_ok = fit.r_squared > DELAY_R2_MIN;
                        CheckLine {
                            scenario,
                            algorithm,
                            description: format!(
                                "affine slope={:.4} (want {expected}+-{DELAY_SLOPE_TOLERANCE}) R2={:.6} (min {DELAY_R2_MIN})",
                                fit.slope, fit.r_squared
                            ),
                            passed: slope_ok && r2_ok,
                        }
                    }
                    Err(e) => CheckLine {
                        scenario,
                        algorithm,
                        description: format!("affine fit failed: {e}"),
                        passed: false,
                    },
                };
                lines.push(line);
            }
            "rate" => {
                let line = match fit_hyperbola(&points) {
                    Ok(fit) => CheckLine {
                        scenario,
                        algorithm,
                        description: format!(
                            "hyperbola m_eff={:.1} c={:.3} R2={:.6} (min {RATE_R2_MIN})",
                            fit.slope, fit.intercept, fit.r_squared
                        ),
                        passed: fit.r_squared > RATE_R2_MIN,
                    },
                    Err(e) => CheckLine {
                        scenario,
                        algorithm,
                        description: format!("hyperbola fit failed: {e}"),
                        passed: false,
                    },
                };
                lines.push(line);
            }
            // Jitter and loss-family sweeps have no closed form to check.
            _ => {}
        }
    }
    Ok(lines)
}
