//! Turns raw result CSVs into per-cell summary statistics, mirroring the
//! results tree layout under the analyzed root.

use std::path::{Path, PathBuf};

use pqshake_core::stats::SummaryStats;
use thiserror::Error;

use crate::runner::{TAG_CONNECT_FAIL, TAG_CORRUPT_ABORT, TAG_TIMEOUT};

/// Header of every analyzed CSV.
pub const ANALYZED_HEADER: &str = "average,std_dev,median,q75,q95,n_success,n_failure";

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("missing input: {0}")]
    MissingInput(PathBuf),
    #[error("malformed result file {path} line {line}: `{token}`")]
    MalformedResultFile {
        path: PathBuf,
        line: usize,
        token: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parsed raw cell: successful durations and the failure count.
pub fn parse_raw_cell(path: &Path, text: &str) -> Result<(Vec<f64>, usize), AnalyzeError> {
    let mut durations = Vec::new();
    let mut failures = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        match s {
            TAG_TIMEOUT | TAG_CONNECT_FAIL | TAG_CORRUPT_ABORT => failures += 1,
            _ => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => durations.push(v),
                _ => {
                    return Err(AnalyzeError::MalformedResultFile {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        token: s.to_string(),
                    })
                }
            },
        }
    }
    Ok((durations, failures))
}

/// Renders one analyzed CSV. A cell with no successes keeps its failure
/// count and `NA` location parameters.
pub fn render_stats(durations: &[f64], failures: usize) -> String {
    match SummaryStats::from_series(durations, failures) {
        Ok(s) => format!(
            "{ANALYZED_HEADER}\n{},{},{},{},{},{},{}\n",
            s.average, s.std_dev, s.median, s.q75, s.q95, s.n_success, s.n_failure
        ),
        Err(_) => format!("{ANALYZED_HEADER}\nNA,NA,NA,NA,NA,0,{failures}\n"),
    }
}

/// Recursively lists files under `root` in a deterministic order.
pub fn sorted_files(root: &Path) -> std::io::Result<Vec<PathBuf>> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        entries.sort();
        for path in entries {
            if path.is_dir() {
                walk(&path, out)?;
            } else {
                out.push(path);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(root, &mut out)?;
    Ok(out)
}

/// Analyzes a results tree into an equivalent analyzed tree: one stats CSV
/// per raw CSV at the mirrored path. Returns the number of files written.
pub fn analyze_tree(results_root: &Path, analyzed_root: &Path) -> Result<usize, AnalyzeError> {
    if !results_root.is_dir() {
        return Err(AnalyzeError::MissingInput(results_root.to_path_buf()));
    }
    let files = sorted_files(results_root)?;
    let mut written = 0usize;
    for path in files {
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let text = std::fs::read_to_string(&path)?;
        let (durations, failures) = parse_raw_cell(&path, &text)?;
        let rel = path
            .strip_prefix(results_root)
            .expect("walked file outside root");
        let dest = analyzed_root.join(rel);
        if let Some(parent) = dest.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&dest, render_stats(&durations, failures))?;
        written += 1;
    }
    Ok(written)
}

/// One parsed analyzed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzedCell {
    pub average: Option<f64>,
    pub std_dev: Option<f64>,
    pub median: Option<f64>,
    pub q75: Option<f64>,
    pub q95: Option<f64>,
    pub n_success: usize,
    pub n_failure: usize,
}

impl AnalyzedCell {
    pub fn statistic(&self, name: &str) -> Option<f64> {
        match name {
            "average" => self.average,
            "std_dev" => self.std_dev,
            "median" => self.median,
            "q75" => self.q75,
            "q95" => self.q95,
            _ => None,
        }
    }
}

/// Reads one analyzed CSV back.
pub fn parse_analyzed(path: &Path, text: &str) -> Result<AnalyzedCell, AnalyzeError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let data = lines.next().unwrap_or("");
    if header != ANALYZED_HEADER {
        return Err(AnalyzeError::MalformedResultFile {
            path: path.to_path_buf(),
            line: 1,
            token: header.to_string(),
        });
    }
    let fields: Vec<&str> = data.split(',').collect();
    if fields.len() != 7 {
        return Err(AnalyzeError::MalformedResultFile {
            path: path.to_path_buf(),
            line: 2,
            token: data.to_string(),
        });
    }
    let opt = |s: &str| -> Option<f64> {
        if s == "NA" {
            None
        } else {
            s.parse().ok()
        }
    };
    let count = |s: &str| -> Result<usize, AnalyzeError> {
        s.parse().map_err(|_| AnalyzeError::MalformedResultFile {
            path: path.to_path_buf(),
            line: 2,
            token: s.to_string(),
        })
    };
    Ok(AnalyzedCell {
        average: opt(fields[0]),
        std_dev: opt(fields[1]),
        median: opt(fields[2]),
        q75: opt(fields[3]),
        q95: opt(fields[4]),
        n_success: count(fields[5])?,
        n_failure: count(fields[6])?,
    })
}
