//! The algorithms CSV: one row per algorithm class, first column the class
//! label (reused as the results subpath), remaining columns the algorithm
//! ids, as many as needed.

use pqshake_core::kem::{Catalog, KemSpec};
use thiserror::Error;

/// Parsed algorithms file.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmsFile {
    /// `(class_label, algorithm_ids)` in file order.
    pub rows: Vec<(String, Vec<String>)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum AlgorithmsError {
    #[error("line {line}: class label must not be empty")]
    EmptyLabel { line: usize },
    #[error("line {line}: class label `{label}` may only contain [A-Za-z0-9._/-] and no `..`")]
    BadLabel { line: usize, label: String },
    #[error("line {line}: class has no algorithm ids")]
    NoIds { line: usize },
    #[error("line {line}: {source}")]
    UnknownAlgorithm {
        line: usize,
        source: pqshake_core::kem::KemError,
    },
}

fn label_ok(label: &str) -> bool {
    !label.is_empty()
        && !label.starts_with('/')
        && !label.split('/').any(|seg| seg.is_empty() || seg == "." || seg == "..")
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '/'))
}

/// Parses and validates against the catalog (hybrid ids expand through it).
pub fn parse_algorithms(text: &str, catalog: &Catalog) -> Result<AlgorithmsFile, AlgorithmsError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',').map(str::trim);
        let label = fields.next().unwrap_or("").to_string();
        if label.is_empty() {
            return Err(AlgorithmsError::EmptyLabel { line });
        }
        if !label_ok(&label) {
            return Err(AlgorithmsError::BadLabel { line, label });
        }
        let ids: Vec<String> = fields.filter(|s| !s.is_empty()).map(str::to_string).collect();
        if ids.is_empty() {
            return Err(AlgorithmsError::NoIds { line });
        }
        for id in &ids {
            catalog
                .resolve(id)
                .map_err(|source| AlgorithmsError::UnknownAlgorithm { line, source })?;
        }
        rows.push((label, ids));
    }
    Ok(AlgorithmsFile { rows })
}

/// Emits an algorithms file covering the whole shipped catalog (except the
/// entries whose key share exceeds the TLS limit), grouped the way the
/// results tree is organized: level / candidates-or-alternatives /
/// pq-only-or-hybrid, plus the classical baselines.
pub fn full_matrix_algorithms(catalog: &Catalog) -> String {
    let mut out = String::new();
    for level in [1u8, 3, 5] {
        for (role_dir, role) in [
            ("candidates", pqshake_core::kem::Role::Candidate),
            ("alternatives", pqshake_core::kem::Role::Alternative),
        ] {
            let entries: Vec<&KemSpec> = catalog
                .entries()
                .iter()
                .filter(|e| {
                    e.nist_level == level
                        && e.role == role
                        && e.pk_bytes <= pqshake_core::handshake::KEY_SHARE_LIMIT
                })
                .collect();
            if entries.is_empty() {
                continue;
            }
            let pq_only: Vec<String> = entries.iter().map(|e| e.id.clone()).collect();
            out.push_str(&format!(
                "level{level}/{role_dir}/pq-only,{}\n",
                pq_only.join(",")
            ));
            let hybrids: Vec<String> = entries
                .iter()
                .filter_map(|e| catalog.make_hybrid(&e.id).ok().map(|h| h.id))
                .collect();
            if !hybrids.is_empty() {
                out.push_str(&format!(
                    "level{level}/{role_dir}/hybrid,{}\n",
                    hybrids.join(",")
                ));
            }
        }
        if let Some((classical, _)) = pqshake_core::kem::classical_partner(level) {
            out.push_str(&format!("level{level}/classical,{classical}\n"));
        }
    }
    out
}
