//! Long-format plot data distilled from an analyzed tree: one row per
//! (scenario parameter value, algorithm, statistic), ready for any plotting
//! tool.

use std::fmt::Write as _;
use std::path::Path;

use pqshake_core::kem::Catalog;

use crate::analyze::{parse_analyzed, sorted_files, AnalyzeError};

pub const PLOT_HEADER: &str = "x_value,x_name,algorithm,level,hybrid_flag,statistic,value";

/// Row grouping of the emitted file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    PerAlgorithm,
    ByLevel,
    HybridVsPqOnly,
}

impl std::str::FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-algorithm" => Ok(Grouping::PerAlgorithm),
            "by-level" => Ok(Grouping::ByLevel),
            "hybrid-vs-pqonly" => Ok(Grouping::HybridVsPqOnly),
            other => Err(format!(
                "unknown grouping `{other}` (expected per-algorithm, by-level or hybrid-vs-pqonly)"
            )),
        }
    }
}

const STATISTICS: &[&str] = &["average", "std_dev", "median", "q75", "q95"];

struct PlotRow {
    x_value: f64,
    x_name: String,
    algorithm: String,
    level: u8,
    hybrid: bool,
    statistic: &'static str,
    value: f64,
    base_id: String,
}

/// Splits a row title like `loss_2.5` into its parameter name and value.
fn split_title(title: &str) -> Option<(String, f64)> {
    let (name, value) = title.rsplit_once('_')?;
    let v: f64 = value.parse().ok()?;
    Some((name.to_string(), v))
}

/// Builds the long-format CSV. `statistic` restricts the emitted statistics
/// (`None` emits all five).
pub fn plot_data(
    analyzed_root: &Path,
    grouping: Grouping,
    statistic: Option<&str>,
    catalog: &Catalog,
) -> Result<String, AnalyzeError> {
    if !analyzed_root.is_dir() {
        return Err(AnalyzeError::MissingInput(analyzed_root.to_path_buf()));
    }
    let mut rows: Vec<PlotRow> = Vec::new();
    let mut fallback_indices: std::collections::BTreeMap<String, f64> = std::collections::BTreeMap::new();
    for path in sorted_files(analyzed_root)? {
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let text = std::fs::read_to_string(&path)?;
        let cell = parse_analyzed(&path, &text)?;
        let rel = path.strip_prefix(analyzed_root).expect("file outside root");
        let components: Vec<String> = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        // <scenario>/<row_title>/<class.../>algorithm.csv
        if components.len() < 3 {
            continue;
        }
        let algorithm = components
            .last()
            .and_then(|f| f.strip_suffix(".csv"))
            .unwrap_or_default()
            .to_string();
        let title = components[1].clone();
        let (x_name, x_value) = split_title(&title).unwrap_or_else(|| {
            // Value-free titles map to stable per-title indices so cells of
            // the same row share an x position.
            let next = fallback_indices.len() as f64 + 1.0;
            let idx = *fallback_indices.entry(title.clone()).or_insert(next);
            ("row".to_string(), idx)
        });
        let Ok(kem) = catalog.resolve(&algorithm) else {
            continue;
        };
        let base_id = kem
            .hybrid
            .as_ref()
            .map(|h| h.pqc_id.clone())
            .unwrap_or_else(|| kem.id.clone());
        for &stat in STATISTICS {
            if let Some(wanted) = statistic {
                if stat != wanted {
                    continue;
                }
            }
            if let Some(value) = cell.statistic(stat) {
                rows.push(PlotRow {
                    x_value,
                    x_name: x_name.clone(),
                    algorithm: algorithm.clone(),
                    level: kem.nist_level,
                    hybrid: kem.hybrid.is_some(),
                    statistic: stat,
                    value,
                    base_id: base_id.clone(),
                });
            }
        }
    }

    match grouping {
        Grouping::PerAlgorithm => rows.sort_by(|a, b| {
            (&a.algorithm, &a.x_name, a.statistic)
                .cmp(&(&b.algorithm, &b.x_name, b.statistic))
                .then(a.x_value.total_cmp(&b.x_value))
        }),
        Grouping::ByLevel => rows.sort_by(|a, b| {
            (a.level, &a.algorithm, &a.x_name, a.statistic)
                .cmp(&(b.level, &b.algorithm, &b.x_name, b.statistic))
                .then(a.x_value.total_cmp(&b.x_value))
        }),
        Grouping::HybridVsPqOnly => {
            // Keep only algorithms present in both variants; pq-only and
            // hybrid twins end up adjacent.
            let mut pq = std::collections::BTreeSet::new();
            let mut hy = std::collections::BTreeSet::new();
            for r in &rows {
                if r.hybrid {
                    hy.insert(r.base_id.clone());
                } else {
                    pq.insert(r.base_id.clone());
                }
            }
            let both: std::collections::BTreeSet<String> = pq.intersection(&hy).cloned().collect();
            rows.retain(|r| both.contains(&r.base_id));
            rows.sort_by(|a, b| {
                (&a.base_id, a.hybrid, &a.x_name, a.statistic)
                    .cmp(&(&b.base_id, b.hybrid, &b.x_name, b.statistic))
                    .then(a.x_value.total_cmp(&b.x_value))
            });
        }
    }

    let mut out = String::from(PLOT_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.x_value,
            r.x_name,
            r.algorithm,
            r.level,
            if r.hybrid { 1 } else { 0 },
            r.statistic,
            r.value
        )
        .expect("write to string");
    }
    Ok(out)
}
