//! Test-scenario CSV files: one row per network configuration, fourteen
//! columns in fixed order (`title`, seven `srv_*` fields for traffic
//! directed at the server, six `cli_*` fields for traffic directed at
//! clients). An optional fifteen-column extended format adds `cli_pkt_loss`
//! for symmetric loss studies.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pqshake_core::link::{LinkProfile, Rate};
use thiserror::Error;

/// Canonical 14-column header.
pub const HEADER: &str = "title,srv_pkt_loss,srv_delay,srv_jitter,srv_duplicate,srv_corrupt,srv_reorder,srv_rate,cli_delay,cli_jitter,cli_duplicate,cli_corrupt,cli_reorder,cli_rate";

/// Extended 15-column header (adds `cli_pkt_loss` ahead of `cli_delay`).
pub const HEADER_EXTENDED: &str = "title,srv_pkt_loss,srv_delay,srv_jitter,srv_duplicate,srv_corrupt,srv_reorder,srv_rate,cli_pkt_loss,cli_delay,cli_jitter,cli_duplicate,cli_corrupt,cli_reorder,cli_rate";

/// Impairments for one direction as carried by a scenario row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideParams {
    pub pkt_loss_pct: f64,
    pub delay_ms: f64,
    pub jitter_ms: f64,
    pub duplicate_pct: f64,
    pub corrupt_pct: f64,
    pub reorder_pct: f64,
    pub rate_mbps: f64,
}

impl SideParams {
    pub fn baseline() -> Self {
        Self {
            pkt_loss_pct: 0.0,
            delay_ms: 2.684,
            jitter_ms: 0.0,
            duplicate_pct: 0.0,
            corrupt_pct: 0.0,
            reorder_pct: 0.0,
            rate_mbps: 500.0,
        }
    }

    fn to_profile(self, jitter_correlation: f64, queue_limit: usize) -> LinkProfile {
        LinkProfile {
            delay_ms: self.delay_ms,
            jitter_ms: self.jitter_ms,
            jitter_correlation,
            loss_pct: self.pkt_loss_pct,
            corrupt_pct: self.corrupt_pct,
            duplicate_pct: self.duplicate_pct,
            reorder_pct: self.reorder_pct,
            rate: Rate::Mbps(self.rate_mbps),
            queue_limit_packets: queue_limit,
        }
    }
}

/// One network configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub title: String,
    /// Traffic directed at the server (client-outgoing link).
    pub srv: SideParams,
    /// Traffic directed at clients (server-outgoing link); carries no loss
    /// column in the 14-column format.
    pub cli: SideParams,
}

impl ScenarioRow {
    pub fn baseline(title: &str) -> Self {
        Self {
            title: title.to_string(),
            srv: SideParams::baseline(),
            cli: SideParams::baseline(),
        }
    }

    /// Builds the two link profiles of this configuration.
    pub fn link_profiles(&self, jitter_correlation: f64, queue_limit: usize) -> (LinkProfile, LinkProfile) {
        (
            self.srv.to_profile(jitter_correlation, queue_limit),
            self.cli.to_profile(jitter_correlation, queue_limit),
        )
    }
}

/// Scenario parsing failure with the offending position.
#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: bad value `{token}`: {reason}")]
    Schema {
        line: usize,
        column: usize,
        token: String,
        reason: String,
    },
    #[error("line {line}: expected {expected} fields, got {got}")]
    FieldCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: duplicate row title `{title}`")]
    DuplicateTitle { line: usize, title: String },
    #[error("scenario file has no data rows")]
    Empty,
}

fn parse_field(line: usize, column: usize, token: &str) -> Result<f64, ScenarioError> {
    let v: f64 = token.trim().parse().map_err(|_| ScenarioError::Schema {
        line,
        column,
        token: token.to_string(),
        reason: "not a number".into(),
    })?;
    if !v.is_finite() {
        return Err(ScenarioError::Schema {
            line,
            column,
            token: token.to_string(),
            reason: "not finite".into(),
        });
    }
    Ok(v)
}

fn check_range(
    line: usize,
    column: usize,
    v: f64,
    lo: f64,
    hi: f64,
    what: &str,
) -> Result<f64, ScenarioError> {
    if v < lo || v > hi {
        return Err(ScenarioError::Schema {
            line,
            column,
            token: format!("{v}"),
            reason: format!("{what} must be in [{lo}, {hi}]"),
        });
    }
    Ok(v)
}

fn parse_side(
    line: usize,
    fields: &[&str],
    first_column: usize,
    with_loss: bool,
) -> Result<SideParams, ScenarioError> {
    let mut col = first_column;
    let mut next = || -> Result<(usize, f64), ScenarioError> {
        let idx = col;
        col += 1;
        let v = parse_field(line, idx, fields[idx - 1])?;
        Ok((idx, v))
    };
    let pkt_loss_pct = if with_loss {
        let (c, v) = next()?;
        check_range(line, c, v, 0.0, 100.0, "pkt_loss")?
    } else {
        0.0
    };
    let (c, delay_ms) = next()?;
    check_range(line, c, delay_ms, 0.0, f64::INFINITY, "delay")?;
    let (c, jitter_ms) = next()?;
    check_range(line, c, jitter_ms, 0.0, f64::INFINITY, "jitter")?;
    let (c, duplicate_pct) = next()?;
    check_range(line, c, duplicate_pct, 0.0, 100.0, "duplicate")?;
    let (c, corrupt_pct) = next()?;
    check_range(line, c, corrupt_pct, 0.0, 100.0, "corrupt")?;
    let (c, reorder_pct) = next()?;
    check_range(line, c, reorder_pct, 0.0, 100.0, "reorder")?;
    let (c, rate_mbps) = next()?;
    if rate_mbps <= 0.0 {
        return Err(ScenarioError::Schema {
            line,
            column: c,
            token: format!("{rate_mbps}"),
            reason: "rate must be > 0 Mbps".into(),
        });
    }
    Ok(SideParams {
        pkt_loss_pct,
        delay_ms,
        jitter_ms,
        duplicate_pct,
        corrupt_pct,
        reorder_pct,
        rate_mbps,
    })
}

/// Parses scenario CSV text. The header line is optional. Fourteen columns
/// by default; `extended` accepts the 15-column format with `cli_pkt_loss`.
pub fn parse_scenario(text: &str, extended: bool) -> Result<Vec<ScenarioRow>, ScenarioError> {
    let expected = if extended { 15 } else { 14 };
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        // A leading header is recognized by its non-numeric second field.
        if idx == 0 && fields.len() >= 2 && fields[1].trim().parse::<f64>().is_err() {
            continue;
        }
        if fields.len() != expected {
            return Err(ScenarioError::FieldCount {
                line,
                expected,
                got: fields.len(),
            });
        }
        let title = fields[0].trim().to_string();
        if title.is_empty() {
            return Err(ScenarioError::Schema {
                line,
                column: 1,
                token: String::new(),
                reason: "title must not be empty".into(),
            });
        }
        let srv = parse_side(line, &fields, 2, true)?;
        let cli = parse_side(line, &fields, 9, extended)?;
        if rows.iter().any(|r: &ScenarioRow| r.title == title) {
            return Err(ScenarioError::DuplicateTitle { line, title });
        }
        rows.push(ScenarioRow { title, srv, cli });
    }
    if rows.is_empty() {
        return Err(ScenarioError::Empty);
    }
    Ok(rows)
}

/// Serializes rows back to CSV (14 columns, or 15 with `extended`).
pub fn emit_scenario(rows: &[ScenarioRow], extended: bool) -> String {
    let mut out = String::new();
    out.push_str(if extended { HEADER_EXTENDED } else { HEADER });
    out.push('\n');
    for r in rows {
        let s = &r.srv;
        let c = &r.cli;
        write!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.title, s.pkt_loss_pct, s.delay_ms, s.jitter_ms, s.duplicate_pct, s.corrupt_pct,
            s.reorder_pct, s.rate_mbps
        )
        .expect("write to string");
        if extended {
            write!(out, ",{}", c.pkt_loss_pct).expect("write to string");
        }
        writeln!(
            out,
            ",{},{},{},{},{},{}",
            c.delay_ms, c.jitter_ms, c.duplicate_pct, c.corrupt_pct, c.reorder_pct, c.rate_mbps
        )
        .expect("write to string");
    }
    out
}

/// Delay sweep, both directions (ms).
pub const DELAY_SET: &[f64] = &[
    0.0, 1.0, 2.5, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0, 80.0, 100.0, 120.0,
];

/// Jitter sweep at 20 ms base delay, both directions (ms).
pub const JITTER_SET: &[f64] = &[
    0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 7.0, 9.0, 12.0, 15.0, 20.0,
];

/// Rate sweep (Mbps).
pub const RATE_SET: &[f64] = &[
    0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 45.0, 60.0, 75.0,
    100.0, 150.0, 250.0, 500.0, 1000.0, 2000.0,
];

/// Loss sweep (%); reorder, duplicate and corrupt reuse the same values for
/// direct comparability.
pub const LOSS_SET: &[f64] = &[
    0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0,
    14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0,
];

fn sweep(prefix: &str, values: &[f64], mut apply: impl FnMut(&mut ScenarioRow, f64)) -> Vec<ScenarioRow> {
    values
        .iter()
        .map(|&v| {
            let mut row = ScenarioRow::baseline(&format!("{prefix}_{v}"));
            apply(&mut row, v);
            row
        })
        .collect()
}

/// The preset scenarios: delay (D), jitter at 20 ms (J), rate for
/// client-outgoing / server-outgoing / both directions (R), packet loss
/// (PL), reorder (RO), duplicates (DU) and corrupt packets (C). Loss-family
/// sweeps vary the `srv` column only, as the 14-column schema dictates;
/// delay, jitter and rate vary symmetrically unless the file name says
/// otherwise.
pub fn presets() -> Vec<(&'static str, Vec<ScenarioRow>)> {
    vec![
        ("scenario_delay.csv", sweep("delay", DELAY_SET, |r, v| {
            r.srv.delay_ms = v;
            r.cli.delay_ms = v;
        })),
        ("scenario_jitter_delay20ms.csv", sweep("jitter", JITTER_SET, |r, v| {
            r.srv.delay_ms = 20.0;
            r.cli.delay_ms = 20.0;
            r.srv.jitter_ms = v;
            r.cli.jitter_ms = v;
        })),
        ("scenario_rate_cli.csv", sweep("rate", RATE_SET, |r, v| {
            r.srv.rate_mbps = v;
        })),
        ("scenario_rate_srv.csv", sweep("rate", RATE_SET, |r, v| {
            r.cli.rate_mbps = v;
        })),
        ("scenario_rate_both.csv", sweep("rate", RATE_SET, |r, v| {
            r.srv.rate_mbps = v;
            r.cli.rate_mbps = v;
        })),
        ("scenario_packetloss.csv", sweep("loss", LOSS_SET, |r, v| {
            r.srv.pkt_loss_pct = v;
        })),
        ("scenario_reorder.csv", sweep("reorder", LOSS_SET, |r, v| {
            r.srv.reorder_pct = v;
        })),
        ("scenario_duplicate.csv", sweep("duplicate", LOSS_SET, |r, v| {
            r.srv.duplicate_pct = v;
        })),
        ("scenario_corrupt.csv", sweep("corrupt", LOSS_SET, |r, v| {
            r.srv.corrupt_pct = v;
        })),
    ]
}

/// Writes every preset scenario into `dir`; returns the created paths.
pub fn write_presets(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, rows) in presets() {
        let path = dir.join(name);
        std::fs::write(&path, emit_scenario(&rows, false))?;
        paths.push(path);
    }
    Ok(paths)
}
