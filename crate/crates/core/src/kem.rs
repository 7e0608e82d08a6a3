//! KEM catalog: NIST round-3 candidates and alternatives plus the classical
//! ECDH baseline, with wire sizes, hybrid composition by concatenation and a
//! pluggable per-operation cost model.
//!
//! Operation timings are an external input (they depend entirely on the
//! machine they were profiled on), so the catalog ships no authoritative
//! numbers; a cost file supplies them per algorithm id.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Mathematical family of a KEM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Lattice,
    Code,
    Isogeny,
    Classical,
}

/// Catalog role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Candidate,
    Alternative,
    ClassicalBaseline,
}

impl Role {
    /// Subdirectory name used by the results tree.
    pub fn results_dir(self) -> &'static str {
        match self {
            Role::Candidate => "candidates",
            Role::Alternative => "alternatives",
            Role::ClassicalBaseline => "classical",
        }
    }
}

/// Two-component hybrid composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridSpec {
    pub classical_id: String,
    pub pqc_id: String,
    pub combined_id: String,
}

/// One key-establishment variant with its wire sizes in bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct KemSpec {
    pub id: String,
    pub family: Family,
    pub nist_level: u8,
    pub role: Role,
    pub pk_bytes: usize,
    pub ct_bytes: usize,
    /// Carried for catalog completeness; never transmitted.
    pub sk_bytes: usize,
    /// Present iff this spec was synthesized by hybrid composition.
    pub hybrid: Option<HybridSpec>,
}

impl KemSpec {
    pub fn is_hybrid(&self) -> bool {
        self.hybrid.is_some()
    }

    pub fn results_variant_dir(&self) -> &'static str {
        if self.is_hybrid() {
            "hybrid"
        } else {
            "pq-only"
        }
    }
}

/// Catalog and cost-model errors.
#[derive(Debug, Clone, PartialEq)]
pub enum KemError {
    UnknownAlgorithm(String),
    NoClassicalPartner(String),
    CostFileMissingEntry(String),
    CostFileMalformed { line: usize, reason: String },
    CatalogFileMalformed { line: usize, reason: String },
}

impl fmt::Display for KemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KemError::UnknownAlgorithm(id) => write!(f, "unknown algorithm: {id}"),
            KemError::NoClassicalPartner(id) => {
                write!(f, "no classical partner for hybrid composition of {id}")
            }
            KemError::CostFileMissingEntry(id) => {
                write!(f, "cost model has no entry for {id}")
            }
            KemError::CostFileMalformed { line, reason } => {
                write!(f, "malformed cost file at line {line}: {reason}")
            }
            KemError::CatalogFileMalformed { line, reason } => {
                write!(f, "malformed catalog file at line {line}: {reason}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KemError {}

const fn entry(
    id: &'static str,
    family: Family,
    level: u8,
    role: Role,
    pk: usize,
    sk: usize,
    ct: usize,
) -> (&'static str, Family, u8, Role, usize, usize, usize) {
    (id, family, level, role, pk, sk, ct)
}

/// Shipped catalog: all parameter sets the benchmark evaluates, one spec per
/// security level. Variants whose NIST level classification was still open
/// (sikep434, ntrulpr653, sntrup653) and the AES/90s siblings are not
/// shipped but remain loadable from a user catalog file.
#[rustfmt::skip]
const SHIPPED: &[(&str, Family, u8, Role, usize, usize, usize)] = &[
    // Candidates
    entry("kyber512",          Family::Lattice, 1, Role::Candidate, 800,    1632,  768),
    entry("kyber768",          Family::Lattice, 3, Role::Candidate, 1184,   2400,  1088),
    entry("kyber1024",         Family::Lattice, 5, Role::Candidate, 1568,   3168,  1568),
    entry("ntru_hps2048509",   Family::Lattice, 1, Role::Candidate, 699,    935,   699),
    entry("ntru_hps2048677",   Family::Lattice, 3, Role::Candidate, 930,    1234,  930),
    entry("ntru_hps4096821",   Family::Lattice, 5, Role::Candidate, 1230,   1592,  1230),
    entry("ntru_hrss701",      Family::Lattice, 3, Role::Candidate, 1138,   1452,  1138),
    entry("lightsaber",        Family::Lattice, 1, Role::Candidate, 672,    1568,  736),
    entry("saber",             Family::Lattice, 3, Role::Candidate, 992,    2304,  1088),
    entry("firesaber",         Family::Lattice, 5, Role::Candidate, 1312,   3040,  1472),
    entry("classic_mceliece_l1", Family::Code,  1, Role::Candidate, 261120, 6492,  128),
    entry("classic_mceliece_l3", Family::Code,  3, Role::Candidate, 524160, 13608, 188),
    entry("classic_mceliece_l5", Family::Code,  5, Role::Candidate, 1044992, 13932, 240),
    // Alternatives
    entry("bikel1",            Family::Code,    1, Role::Alternative, 1541,  5223,  1573),
    entry("bikel3",            Family::Code,    3, Role::Alternative, 3083,  10105, 3115),
    entry("frodo640shake",     Family::Lattice, 1, Role::Alternative, 9616,  19888, 9720),
    entry("frodo976shake",     Family::Lattice, 3, Role::Alternative, 15632, 31296, 15744),
    entry("frodo1344shake",    Family::Lattice, 5, Role::Alternative, 21520, 43088, 21632),
    entry("hqc128",            Family::Code,    1, Role::Alternative, 2249,  2289,  4481),
    entry("hqc192",            Family::Code,    3, Role::Alternative, 4522,  4562,  9026),
    entry("hqc256",            Family::Code,    5, Role::Alternative, 7245,  7285,  14469),
    entry("sntrup857",         Family::Lattice, 3, Role::Alternative, 1322,  1999,  1184),
    entry("sntrup1277",        Family::Lattice, 5, Role::Alternative, 2067,  3059,  1847),
    entry("ntrulpr857",        Family::Lattice, 3, Role::Alternative, 1184,  1463,  1312),
    entry("ntrulpr1277",       Family::Lattice, 5, Role::Alternative, 1847,  2231,  1975),
    entry("sikep503",          Family::Isogeny, 1, Role::Alternative, 378,   434,   402),
    entry("sikep610",          Family::Isogeny, 3, Role::Alternative, 462,   524,   486),
    entry("sikep751",          Family::Isogeny, 5, Role::Alternative, 564,   644,   596),
    // Classical ECDH baseline. Wire size is the uncompressed point:
    // 1 + 2 * coordinate bytes; the "ciphertext" is the server's own share.
    entry("prime256v1",        Family::Classical, 1, Role::ClassicalBaseline, 65,  32, 65),
    entry("secp384r1",         Family::Classical, 3, Role::ClassicalBaseline, 97,  48, 97),
    entry("secp521r1",         Family::Classical, 5, Role::ClassicalBaseline, 133, 66, 133),
];

/// Classical partner per NIST level.
pub fn classical_partner(level: u8) -> Option<(&'static str, &'static str)> {
    match level {
        1 => Some(("prime256v1", "p256")),
        3 => Some(("secp384r1", "p384")),
        5 => Some(("secp521r1", "p521")),
        _ => None,
    }
}

/// Immutable algorithm catalog.
#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<KemSpec>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::shipped()
    }
}

impl Catalog {
    /// The default shipped catalog.
    pub fn shipped() -> Self {
        let entries = SHIPPED
            .iter()
            .map(|&(id, family, nist_level, role, pk, sk, ct)| KemSpec {
                id: id.to_owned(),
                family,
                nist_level,
                role,
                pk_bytes: pk,
                ct_bytes: ct,
                sk_bytes: sk,
                hybrid: None,
            })
            .collect();
        Self { entries }
    }

    /// Extends the catalog from a flat text file: one record per line,
    /// `id family level role pk_bytes ct_bytes sk_bytes`, `#` comments.
    pub fn extend_from_text(&mut self, text: &str) -> Result<(), KemError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = s.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(KemError::CatalogFileMalformed {
                    line,
                    reason: format!("expected 7 fields, got {}", fields.len()),
                });
            }
            let family = match fields[1] {
                "lattice" => Family::Lattice,
                "code" => Family::Code,
                "isogeny" => Family::Isogeny,
                "classical" => Family::Classical,
                other => {
                    return Err(KemError::CatalogFileMalformed {
                        line,
                        reason: format!("unknown family {other}"),
                    })
                }
            };
            let role = match fields[3] {
                "candidate" => Role::Candidate,
                "alternative" => Role::Alternative,
                "classical" => Role::ClassicalBaseline,
                other => {
                    return Err(KemError::CatalogFileMalformed {
                        line,
                        reason: format!("unknown role {other}"),
                    })
                }
            };
            let num = |i: usize| -> Result<usize, KemError> {
                fields[i].parse().map_err(|_| KemError::CatalogFileMalformed {
                    line,
                    reason: format!("invalid number {}", fields[i]),
                })
            };
            let level: u8 = fields[2].parse().map_err(|_| KemError::CatalogFileMalformed {
                line,
                reason: format!("invalid level {}", fields[2]),
            })?;
            if !matches!(level, 1 | 3 | 5) {
                return Err(KemError::CatalogFileMalformed {
                    line,
                    reason: format!("level must be 1, 3 or 5, got {level}"),
                });
            }
            let spec = KemSpec {
                id: fields[0].to_owned(),
                family,
                nist_level: level,
                role,
                pk_bytes: num(4)?,
                ct_bytes: num(5)?,
                sk_bytes: num(6)?,
                hybrid: None,
            };
            if spec.pk_bytes == 0 || spec.ct_bytes == 0 {
                return Err(KemError::CatalogFileMalformed {
                    line,
                    reason: "pk_bytes and ct_bytes must be > 0".to_owned(),
                });
            }
            if self.entries.iter().any(|e| e.id == spec.id) {
                return Err(KemError::CatalogFileMalformed {
                    line,
                    reason: format!("duplicate id {}", spec.id),
                });
            }
            self.entries.push(spec);
        }
        Ok(())
    }

    pub fn entries(&self) -> &[KemSpec] {
        &self.entries
    }

    /// Direct lookup of a non-hybrid entry.
    pub fn lookup(&self, id: &str) -> Result<&KemSpec, KemError> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| KemError::UnknownAlgorithm(id.to_owned()))
    }

    /// Synthesizes the hybrid of a PQC entry with its level-matched
    /// classical partner: sizes concatenate, id gains the `p256_`-style
    /// prefix, costs sum per operation (see [`CostModel::resolve`]).
    pub fn make_hybrid(&self, pqc_id: &str) -> Result<KemSpec, KemError> {
        let pqc = self.lookup(pqc_id)?;
        if pqc.family == Family::Classical || pqc.is_hybrid() {
            // Composition is limited to two components.
            return Err(KemError::NoClassicalPartner(pqc_id.to_owned()));
        }
        let (classical_id, prefix) = classical_partner(pqc.nist_level)
            .ok_or_else(|| KemError::NoClassicalPartner(pqc_id.to_owned()))?;
        let classical = self.lookup(classical_id)?;
        let combined_id = format!("{prefix}_{}", pqc.id);
        Ok(KemSpec {
            id: combined_id.clone(),
            family: pqc.family,
            nist_level: pqc.nist_level,
            role: pqc.role,
            pk_bytes: classical.pk_bytes + pqc.pk_bytes,
            ct_bytes: classical.ct_bytes + pqc.ct_bytes,
            sk_bytes: classical.sk_bytes + pqc.sk_bytes,
            hybrid: Some(HybridSpec {
                classical_id: classical.id.clone(),
                pqc_id: pqc.id.clone(),
                combined_id,
            }),
        })
    }

    /// Resolves an id that may name either a catalog entry or a hybrid
    /// composition (`p256_kyber512` style).
    pub fn resolve(&self, id: &str) -> Result<KemSpec, KemError> {
        if let Ok(spec) = self.lookup(id) {
            return Ok(spec.clone());
        }
        for prefix in ["p256_", "p384_", "p521_"] {
            if let Some(rest) = id.strip_prefix(prefix) {
                let hybrid = self.make_hybrid(rest)?;
                if hybrid.id == id {
                    return Ok(hybrid);
                }
                // Prefix does not match the component's level.
                return Err(KemError::UnknownAlgorithm(id.to_owned()));
            }
        }
        Err(KemError::UnknownAlgorithm(id.to_owned()))
    }
}

/// Per-operation costs in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OpCosts {
    pub keygen_ms: f64,
    pub encaps_ms: f64,
    pub decaps_ms: f64,
}

impl OpCosts {
    pub fn total_ms(&self) -> f64 {
        self.keygen_ms + self.encaps_ms + self.decaps_ms
    }

    fn add(self, other: OpCosts) -> OpCosts {
        OpCosts {
            keygen_ms: self.keygen_ms + other.keygen_ms,
            encaps_ms: self.encaps_ms + other.encaps_ms,
            decaps_ms: self.decaps_ms + other.decaps_ms,
        }
    }
}

/// Operation cost model loaded from a flat text file:
/// `id keygen_ms encaps_ms decaps_ms` per line, `#` comments.
#[derive(Debug, Clone, Default)]
pub struct CostModel {
    entries: Vec<(String, OpCosts)>,
    /// Explicit all-zero model; a parsed file with missing ids still errors.
    zero_default: bool,
    pub source_label: String,
}

impl CostModel {
    /// All-zero costs for every id; useful when only transport effects are
    /// under study.
    pub fn zeros() -> Self {
        Self {
            entries: Vec::new(),
            zero_default: true,
            source_label: "zero".to_owned(),
        }
    }

    pub fn is_zero_default(&self) -> bool {
        self.zero_default
    }

    pub fn set(&mut self, id: &str, costs: OpCosts) {
        if let Some(e) = self.entries.iter_mut().find(|(k, _)| k == id) {
            e.1 = costs;
        } else {
            self.entries.push((id.to_owned(), costs));
        }
    }

    pub fn parse(text: &str, source_label: &str) -> Result<Self, KemError> {
        let mut model = CostModel {
            entries: Vec::new(),
            zero_default: false,
            source_label: source_label.to_owned(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = s.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(KemError::CostFileMalformed {
                    line,
                    reason: format!("expected `id keygen_ms encaps_ms decaps_ms`, got {} fields", fields.len()),
                });
            }
            let parse_ms = |i: usize| -> Result<f64, KemError> {
                let v: f64 = fields[i].parse().map_err(|_| KemError::CostFileMalformed {
                    line,
                    reason: format!("invalid number {}", fields[i]),
                })?;
                if v < 0.0 || !v.is_finite() {
                    return Err(KemError::CostFileMalformed {
                        line,
                        reason: format!("cost must be a finite value >= 0, got {v}"),
                    });
                }
                Ok(v)
            };
            let costs = OpCosts {
                keygen_ms: parse_ms(1)?,
                encaps_ms: parse_ms(2)?,
                decaps_ms: parse_ms(3)?,
            };
            model.set(fields[0], costs);
        }
        Ok(model)
    }

    fn direct(&self, id: &str) -> Option<OpCosts> {
        self.entries.iter().find(|(k, _)| k == id).map(|(_, c)| *c)
    }

    /// Costs for a resolved spec. Hybrids sum their components per
    /// operation unless the file carries an explicit entry for the combined
    /// id. The all-zero default resolves everything to zero.
    pub fn resolve(&self, spec: &KemSpec) -> Result<OpCosts, KemError> {
        if self.is_zero_default() {
            return Ok(OpCosts::default());
        }
        if let Some(c) = self.direct(&spec.id) {
            return Ok(c);
        }
        if let Some(h) = &spec.hybrid {
            let classical = self
                .direct(&h.classical_id)
                .ok_or_else(|| KemError::CostFileMissingEntry(h.classical_id.clone()))?;
            let pqc = self
                .direct(&h.pqc_id)
                .ok_or_else(|| KemError::CostFileMissingEntry(h.pqc_id.clone()))?;
            return Ok(classical.add(pqc));
        }
        Err(KemError::CostFileMissingEntry(spec.id.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Transcription of the printed KEM size tables (candidates and
    /// alternatives, sizes in bytes, `(name, level, pk, sk, ct)`), including
    /// rows the shipped catalog does not expose. Any edit to a shipped size
    /// must break this test.
    #[rustfmt::skip]
    const KEM_TABLE: &[(&str, u8, usize, usize, usize)] = &[
        // Candidates
        ("classic_mceliece_l1", 1, 261120,  6492,  128),
        ("classic_mceliece_l3", 3, 524160,  13608, 188),
        ("classic_mceliece_l5", 5, 1044992, 13932, 240),
        ("classic_mceliece_l5_f", 5, 1047319, 13948, 226),
        ("classic_mceliece_l5_big", 5, 1357824, 14120, 240),
        ("kyber512",  1, 800,  1632, 768),
        ("kyber768",  3, 1184, 2400, 1088),
        ("kyber1024", 5, 1568, 3168, 1568),
        ("ntru_hps2048509", 1, 699,  935,  699),
        ("ntru_hps2048677", 3, 930,  1234, 930),
        ("ntru_hps4096821", 5, 1230, 1592, 1230),
        ("ntru_hrss701",    3, 1138, 1452, 1138),
        ("lightsaber", 1, 672,  1568, 736),
        ("saber",      3, 992,  2304, 1088),
        ("firesaber",  5, 1312, 3040, 1472),
        // Alternatives
        ("bikel1", 1, 1541, 5223,  1573),
        ("bikel3", 3, 3083, 10105, 3115),
        ("frodo640shake",  1, 9616,  19888, 9720),
        ("frodo976shake",  3, 15632, 31296, 15744),
        ("frodo1344shake", 5, 21520, 43088, 21632),
        ("hqc128", 1, 2249, 2289, 4481),
        ("hqc192", 3, 4522, 4562, 9026),
        ("hqc256", 5, 7245, 7285, 14469),
        ("sntrup653",  1, 994,  1518, 897),
        ("sntrup761",  2, 1158, 1763, 1039),
        ("sntrup857",  3, 1322, 1999, 1184),
        ("sntrup1277", 5, 2067, 3059, 1847),
        ("ntrulpr653",  1, 897,  1125, 1025),
        ("ntrulpr761",  2, 1039, 1294, 1167),
        ("ntrulpr857",  3, 1184, 1463, 1312),
        ("ntrulpr1277", 5, 1847, 2231, 1975),
        ("sikep503", 1, 378, 434, 402),
        ("sikep610", 3, 462, 524, 486),
        ("sikep751", 5, 564, 644, 596),
    ];

    #[test]
    fn shipped_sizes_match_the_embedded_tables() {
        let catalog = Catalog::shipped();
        for spec in catalog.entries() {
            if spec.family == Family::Classical {
                continue;
            }
            let row = KEM_TABLE
                .iter()
                .find(|(name, ..)| *name == spec.id)
                .unwrap_or_else(|| panic!("{} missing from the embedded table", spec.id));
            assert_eq!(spec.nist_level, row.1, "{} level", spec.id);
            assert_eq!(spec.pk_bytes, row.2, "{} pk", spec.id);
            assert_eq!(spec.sk_bytes, row.3, "{} sk", spec.id);
            assert_eq!(spec.ct_bytes, row.4, "{} ct", spec.id);
        }
    }

    #[test]
    fn ids_are_unique() {
        let catalog = Catalog::shipped();
        for (i, a) in catalog.entries().iter().enumerate() {
            for b in &catalog.entries()[i + 1..] {
                assert_ne!(a.id, b.id);
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let catalog = Catalog::shipped();
        let kyber = catalog.lookup("kyber512").unwrap();
        assert_eq!((kyber.pk_bytes, kyber.ct_bytes, kyber.nist_level), (800, 768, 1));
        let frodo = catalog.lookup("frodo640shake").unwrap();
        assert_eq!((frodo.pk_bytes, frodo.ct_bytes), (9616, 9720));
        let sike = catalog.lookup("sikep503").unwrap();
        assert_eq!((sike.pk_bytes, sike.ct_bytes, sike.nist_level), (378, 402, 1));
        let mceliece = catalog.lookup("classic_mceliece_l1").unwrap();
        assert_eq!((mceliece.pk_bytes, mceliece.ct_bytes), (261120, 128));
        assert!(matches!(
            catalog.lookup("nonexistent"),
            Err(KemError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn hybrid_concatenates_sizes() {
        let catalog = Catalog::shipped();
        let h = catalog.make_hybrid("kyber512").unwrap();
        assert_eq!(h.id, "p256_kyber512");
        assert_eq!(h.pk_bytes, 65 + 800);
        assert_eq!(h.ct_bytes, 65 + 768);
        let h = catalog.make_hybrid("frodo640shake").unwrap();
        assert_eq!(h.pk_bytes, 65 + 9616);
        let h = catalog.make_hybrid("kyber768").unwrap();
        assert_eq!(h.id, "p384_kyber768");
        assert_eq!(h.pk_bytes, 97 + 1184);
        let h = catalog.make_hybrid("kyber1024").unwrap();
        assert_eq!(h.id, "p521_kyber1024");
    }

    #[test]
    fn hybrid_size_additivity_holds_for_every_pqc_entry() {
        let catalog = Catalog::shipped();
        for spec in catalog.entries() {
            if spec.family == Family::Classical {
                continue;
            }
            let (classical_id, _) = classical_partner(spec.nist_level).unwrap();
            let classical = catalog.lookup(classical_id).unwrap();
            let h = catalog.make_hybrid(&spec.id).unwrap();
            assert_eq!(h.pk_bytes, classical.pk_bytes + spec.pk_bytes);
            assert_eq!(h.ct_bytes, classical.ct_bytes + spec.ct_bytes);
        }
    }

    #[test]
    fn hybrid_of_hybrid_is_rejected() {
        let catalog = Catalog::shipped();
        // Classical entries have no partner either: composition stays at two.
        assert!(matches!(
            catalog.make_hybrid("prime256v1"),
            Err(KemError::NoClassicalPartner(_))
        ));
        assert!(matches!(
            catalog.resolve("p256_p256_kyber512"),
            Err(KemError::UnknownAlgorithm(_) | KemError::NoClassicalPartner(_))
        ));
    }

    #[test]
    fn resolve_checks_prefix_level() {
        let catalog = Catalog::shipped();
        assert!(catalog.resolve("p256_kyber512").is_ok());
        assert!(matches!(
            catalog.resolve("p384_kyber512"),
            Err(KemError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn level_partner_mapping_is_total() {
        for level in [1u8, 3, 5] {
            assert!(classical_partner(level).is_some());
        }
        assert!(classical_partner(2).is_none());
    }

    #[test]
    fn cost_model_parsing_and_hybrid_summation() {
        let text = "# example\nkyber512 0.02 0.03 0.02\nprime256v1 0.05 0.06 0.04\n";
        let model = CostModel::parse(text, "test").unwrap();
        let catalog = Catalog::shipped();
        let kyber = catalog.lookup("kyber512").unwrap();
        let c = model.resolve(kyber).unwrap();
        assert_eq!(c.encaps_ms, 0.03);
        let hybrid = catalog.make_hybrid("kyber512").unwrap();
        let hc = model.resolve(&hybrid).unwrap();
        assert!((hc.encaps_ms - 0.09).abs() < 1e-12);
        assert!((hc.total_ms() - (0.07 + 0.15)).abs() < 1e-12);
    }

    #[test]
    fn cost_model_missing_entry_is_an_error() {
        let model = CostModel::parse("kyber512 0 0 0\n", "test").unwrap();
        let catalog = Catalog::shipped();
        let ntru = catalog.lookup("ntru_hps2048509").unwrap();
        assert_eq!(
            model.resolve(ntru),
            Err(KemError::CostFileMissingEntry("ntru_hps2048509".to_owned()))
        );
    }

    #[test]
    fn cost_model_rejects_negative_and_malformed() {
        assert!(matches!(
            CostModel::parse("kyber512 -1 0 0\n", "t"),
            Err(KemError::CostFileMalformed { line: 1, .. })
        ));
        assert!(matches!(
            CostModel::parse("kyber512 0 0\n", "t"),
            Err(KemError::CostFileMalformed { line: 1, .. })
        ));
    }

    #[test]
    fn all_zero_file_is_valid() {
        let model = CostModel::parse("kyber512 0 0 0\n", "t").unwrap();
        let catalog = Catalog::shipped();
        let c = model.resolve(catalog.lookup("kyber512").unwrap()).unwrap();
        assert_eq!(c.total_ms(), 0.0);
    }

    #[test]
    fn user_catalog_extension() {
        let mut catalog = Catalog::shipped();
        catalog
            .extend_from_text("# excluded variants stay loadable\nsikep434 isogeny 1 alternative 330 374 346\n")
            .unwrap();
        let spec = catalog.lookup("sikep434").unwrap();
        assert_eq!(spec.pk_bytes, 330);
        assert!(catalog.extend_from_text("sikep434 isogeny 1 alternative 330 374 346\n").is_err());
    }

    #[test]
    fn bike_ships_levels_one_and_three_only() {
        let catalog = Catalog::shipped();
        assert!(catalog.lookup("bikel1").is_ok());
        assert!(catalog.lookup("bikel3").is_ok());
        assert!(catalog.entries().iter().all(|e| !(e.id.starts_with("bike") && e.nist_level == 5)));
    }
}
