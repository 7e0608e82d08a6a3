//! Measurement matrix: every (scenario row, algorithm) cell runs its seeded
//! measurement series and writes one raw CSV under the results tree
//! `results/<scenario>/<row_title>/<class_label>/<algorithm>.csv`.
//!
//! Cells are independent tasks on a bounded worker pool. Every measurement
//! derives its own random stream from `(master_seed, row, algorithm,
//! measurement)`, so the output bytes do not depend on the pool size or on
//! scheduling order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use pqshake_core::handshake::{build_transcript, Transcript};
use pqshake_core::kem::{Catalog, CostModel};
use pqshake_core::link::LinkProfile;
use pqshake_core::rng::{RunRng, StreamKey};
use pqshake_core::sim::{simulate_handshake, HandshakeFailure, SimConfig};
use thiserror::Error;

use crate::algorithms::AlgorithmsFile;
use crate::runconfig::RunnerConfig;
use crate::scenario::ScenarioRow;

/// Failure tags as persisted in raw result CSVs.
pub const TAG_TIMEOUT: &str = "TIMEOUT";
pub const TAG_CONNECT_FAIL: &str = "CONNECT_FAIL";
pub const TAG_CORRUPT_ABORT: &str = "CORRUPT_ABORT";

/// Cap on retry attempts per measurement when `retry_failures` reproduces
/// the original keep-trying loop.
const RETRY_FACTOR: usize = 10;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("algorithm {id}: {source}")]
    Algorithm {
        id: String,
        source: pqshake_core::kem::KemError,
    },
    #[error("algorithm {id}: {source}")]
    Transcript {
        id: String,
        source: pqshake_core::handshake::TranscriptError,
    },
    #[error("scenario row {title}: {reason}")]
    Scenario { title: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One measurement outcome as a CSV line.
fn record_line(result: &Result<f64, HandshakeFailure>) -> String {
    match result {
        Ok(ms) => format!("{ms}"),
        Err(HandshakeFailure::HandshakeTimeout) => TAG_TIMEOUT.to_string(),
        Err(HandshakeFailure::ConnectTimeout) => TAG_CONNECT_FAIL.to_string(),
        Err(HandshakeFailure::HandshakeCorruptAbort) => TAG_CORRUPT_ABORT.to_string(),
    }
}

/// Runs the full series of one cell and renders the CSV body.
pub fn run_cell(
    transcript: &Transcript,
    sim: &SimConfig,
    to_server: &LinkProfile,
    to_client: &LinkProfile,
    cfg: &RunnerConfig,
    row_index: u64,
) -> String {
    let n = cfg.n_measurements();
    let mut out = String::new();
    if cfg.retry_failures {
        // Original semantics: failures are retried until n successes (or
        // the attempt cap); only what the loop kept is persisted.
        let cap = n * RETRY_FACTOR;
        let mut attempt = 0u64;
        let mut kept = 0usize;
        let mut tail_failures = Vec::new();
        while kept < n && (attempt as usize) < cap {
            let mut rng = RunRng::new(
                cfg.master_seed,
                StreamKey::new(row_index, &transcript.algorithm_id, attempt),
            );
            let res = simulate_handshake(transcript, sim, to_server, to_client, &mut rng);
            attempt += 1;
            match res {
                Ok(ms) => {
                    kept += 1;
                    writeln!(out, "{ms}").expect("write to string");
                }
                Err(e) => tail_failures.push(e),
            }
        }
        // Attempt cap exhausted: pad with the observed failures so the cell
        // still carries exactly n records.
        let mut fi = 0;
        while kept < n {
            let e = tail_failures
                .get(fi)
                .copied()
                .unwrap_or(HandshakeFailure::HandshakeTimeout);
            fi += 1;
            kept += 1;
            writeln!(out, "{}", record_line(&Err(e))).expect("write to string");
        }
    } else {
        for m in 0..n {
            let mut rng = RunRng::new(
                cfg.master_seed,
                StreamKey::new(row_index, &transcript.algorithm_id, m as u64),
            );
            let res = simulate_handshake(transcript, sim, to_server, to_client, &mut rng);
            writeln!(out, "{}", record_line(&res)).expect("write to string");
        }
    }
    out
}

fn sanitize_component(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct CellTask {
    row_index: u64,
    transcript: Transcript,
    to_server: LinkProfile,
    to_client: LinkProfile,
    path: PathBuf,
}

/// Executes the whole matrix and writes the results tree. Returns the
/// number of cells written.
pub fn run_matrix(
    scenario_name: &str,
    rows: &[ScenarioRow],
    algorithms: &AlgorithmsFile,
    cfg: &RunnerConfig,
    catalog: &Catalog,
    costs: &CostModel,
    out_root: &Path,
) -> Result<usize, RunError> {
    let sim = cfg.sim_config();
    let fp = cfg.flight_profile();

    // Resolve every algorithm once up front; a key share beyond the TLS
    // limit or a missing cost entry aborts before any simulation runs.
    let mut transcripts: Vec<(String, String, Transcript)> = Vec::new();
    for (label, ids) in &algorithms.rows {
        for id in ids {
            let kem = catalog
                .resolve(id)
                .map_err(|source| RunError::Algorithm { id: id.clone(), source })?;
            let transcript = build_transcript(&kem, costs, &fp)
                .map_err(|source| RunError::Transcript { id: id.clone(), source })?;
            transcripts.push((label.clone(), id.clone(), transcript));
        }
    }

    let scenario_dir = out_root
        .join("results")
        .join(sanitize_component(scenario_name));
    let mut tasks: Vec<CellTask> = Vec::new();
    for (row_index, row) in rows.iter().enumerate() {
        let (to_server, to_client) =
            row.link_profiles(cfg.jitter_correlation, cfg.queue_limit_packets);
        for profile in [&to_server, &to_client] {
            profile.validate().map_err(|e| RunError::Scenario {
                title: row.title.clone(),
                reason: e.to_string(),
            })?;
        }
        let row_dir = scenario_dir.join(sanitize_component(&row.title));
        for (label, id, transcript) in &transcripts {
            let mut path = row_dir.clone();
            for seg in label.split('/') {
                path = path.join(sanitize_component(seg));
            }
            path = path.join(format!("{}.csv", sanitize_component(id)));
            tasks.push(CellTask {
                row_index: row_index as u64,
                transcript: transcript.clone(),
                to_server: to_server.clone(),
                to_client: to_client.clone(),
                path,
            });
        }
    }

    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<std::io::Error>> = Mutex::new(None);
    let workers = cfg.pool_size.min(tasks.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(task) = tasks.get(idx) else { break };
                let body = run_cell(
                    &task.transcript,
                    &sim,
                    &task.to_server,
                    &task.to_client,
                    cfg,
                    task.row_index,
                );
                let io = task
                    .path
                    .parent()
                    .map(std::fs::create_dir_all)
                    .unwrap_or(Ok(()))
                    .and_then(|()| std::fs::write(&task.path, body));
                if let Err(e) = io {
                    *failure.lock().expect("poisoned io mutex") = Some(e);
                    break;
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().expect("poisoned io mutex") {
        return Err(RunError::Io(e));
    }
    Ok(tasks.len())
}
