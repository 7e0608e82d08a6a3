//! Run configuration: a flat `key = value` text file with one entry per
//! line. Unknown keys are rejected so typos surface instead of silently
//! running defaults.

use std::path::PathBuf;

use pqshake_core::handshake::FlightProfile;
use pqshake_core::sim::SimConfig;
use pqshake_core::tcp::TcpConfig;
use thiserror::Error;

/// Measurement-matrix configuration with the study defaults: 10 timers of
/// 20 measurements (200 per cell) on a pool of 7 workers.
#[derive(Debug, Clone, PartialEq)]
pub struct RunnerConfig {
    pub timers: usize,
    pub measurements_per_timer: usize,
    pub pool_size: usize,
    pub master_seed: u64,
    pub deadline_s: f64,
    pub retry_failures: bool,
    pub jitter_correlation: f64,
    pub queue_limit_packets: usize,
    pub mss_bytes: usize,
    pub initcwnd_segments: usize,
    pub min_rto_ms: f64,
    pub max_rto_ms: f64,
    pub initial_rto_ms: f64,
    pub dupack_threshold: u32,
    pub connect_included: bool,
    pub passthrough_prob: f64,
    pub client_hello_base_bytes: usize,
    pub server_flight_base_bytes: usize,
    pub client_finished_bytes: usize,
    /// Accept the 15-column scenario format with `cli_pkt_loss`.
    pub extended_scenario_format: bool,
    pub cost_file: Option<PathBuf>,
    pub catalog_file: Option<PathBuf>,
}

impl Default for RunnerConfig {
    fn default() -> Self {
        let tcp = TcpConfig::default();
        let fp = FlightProfile::default();
        Self {
            timers: 10,
            measurements_per_timer: 20,
            pool_size: 7,
            master_seed: 1,
            deadline_s: 60.0,
            retry_failures: false,
            jitter_correlation: 0.25,
            queue_limit_packets: 1000,
            mss_bytes: tcp.mss_bytes,
            initcwnd_segments: tcp.initcwnd_segments,
            min_rto_ms: tcp.min_rto_ms,
            max_rto_ms: tcp.max_rto_ms,
            initial_rto_ms: tcp.initial_rto_ms,
            dupack_threshold: tcp.dupack_threshold,
            connect_included: tcp.connect_included,
            passthrough_prob: tcp.corrupt_passthrough_prob,
            client_hello_base_bytes: fp.client_hello_base_bytes,
            server_flight_base_bytes: fp.server_flight_base_bytes,
            client_finished_bytes: fp.client_finished_bytes,
            extended_scenario_format: false,
            cost_file: None,
            catalog_file: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("{0}")]
    Invalid(String),
}

impl RunnerConfig {
    /// Total measurements per (scenario row, algorithm) cell.
    pub fn n_measurements(&self) -> usize {
        self.timers * self.measurements_per_timer
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            tcp: TcpConfig {
                mss_bytes: self.mss_bytes,
                initcwnd_segments: self.initcwnd_segments,
                min_rto_ms: self.min_rto_ms,
                max_rto_ms: self.max_rto_ms,
                initial_rto_ms: self.initial_rto_ms,
                connect_included: self.connect_included,
                dupack_threshold: self.dupack_threshold,
                corrupt_passthrough_prob: self.passthrough_prob,
            },
            deadline_us: (self.deadline_s * 1e6).round() as u64,
        }
    }

    pub fn flight_profile(&self) -> FlightProfile {
        FlightProfile {
            client_hello_base_bytes: self.client_hello_base_bytes,
            server_flight_base_bytes: self.server_flight_base_bytes,
            client_finished_bytes: self.client_finished_bytes,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunnerConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (key, value) = s.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: s.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |reason: &str| ConfigError::BadValue {
                line,
                key: key.to_string(),
                reason: reason.to_string(),
            };
            macro_rules! num {
                ($ty:ty) => {
                    value.parse::<$ty>().map_err(|e| bad(&e.to_string()))?
                };
            }
            match key {
                "timers" => cfg.timers = num!(usize),
                "measurements_per_timer" => cfg.measurements_per_timer = num!(usize),
                "pool_size" => cfg.pool_size = num!(usize),
                "master_seed" => cfg.master_seed = num!(u64),
                "deadline_s" => cfg.deadline_s = num!(f64),
                "retry_failures" => cfg.retry_failures = parse_bool(value).ok_or_else(|| bad("expected true/false"))?,
                "jitter_correlation" => cfg.jitter_correlation = num!(f64),
                "queue_limit_packets" => cfg.queue_limit_packets = num!(usize),
                "mss_bytes" => cfg.mss_bytes = num!(usize),
                "initcwnd" | "initcwnd_segments" => cfg.initcwnd_segments = num!(usize),
                "min_rto_ms" => cfg.min_rto_ms = num!(f64),
                "max_rto_ms" => cfg.max_rto_ms = num!(f64),
                "initial_rto_ms" => cfg.initial_rto_ms = num!(f64),
                "dupack_threshold" => cfg.dupack_threshold = num!(u32),
                "connect_included" => cfg.connect_included = parse_bool(value).ok_or_else(|| bad("expected true/false"))?,
                "passthrough_prob" => cfg.passthrough_prob = num!(f64),
                "client_hello_base_bytes" => cfg.client_hello_base_bytes = num!(usize),
                "server_flight_base_bytes" => cfg.server_flight_base_bytes = num!(usize),
                "client_finished_bytes" => cfg.client_finished_bytes = num!(usize),
                "extended_scenario_format" => {
                    cfg.extended_scenario_format = parse_bool(value).ok_or_else(|| bad("expected true/false"))?
                }
                "cost_file" => cfg.cost_file = Some(PathBuf::from(value)),
                "catalog_file" => cfg.catalog_file = Some(PathBuf::from(value)),
                other => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.timers == 0 || self.measurements_per_timer == 0 {
            return Err(ConfigError::Invalid(
                "timers and measurements_per_timer must be >= 1".into(),
            ));
        }
        if self.pool_size == 0 {
            return Err(ConfigError::Invalid("pool_size must be >= 1".into()));
        }
        if self.deadline_s <= 0.0 {
            return Err(ConfigError::Invalid("deadline_s must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.jitter_correlation) {
            return Err(ConfigError::Invalid(
                "jitter_correlation must be in [0, 1]".into(),
            ));
        }
        self.sim_config()
            .tcp
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.flight_profile()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}
