//! The two cost files shipped in `costs/` must parse and resolve every
//! catalog id, including the hybrid compositions.

use std::path::Path;

use pqshake_core::handshake::KEY_SHARE_LIMIT;
use pqshake_core::kem::{Catalog, CostModel, Family};

fn load(name: &str) -> CostModel {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../costs").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    CostModel::parse(&text, name).unwrap()
}

#[test]
fn shipped_cost_files_cover_the_catalog() {
    let catalog = Catalog::shipped();
    for name in ["zero.costs", "example.costs"] {
        let model = load(name);
        for spec in catalog.entries() {
            let costs = model.resolve(spec).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(costs.total_ms() >= 0.0);
            if spec.family != Family::Classical && spec.pk_bytes <= KEY_SHARE_LIMIT {
                let hybrid = catalog.make_hybrid(&spec.id).unwrap();
                let hc = model.resolve(&hybrid).unwrap_or_else(|e| panic!("{name}: {e}"));
                let classical = catalog
                    .lookup(&hybrid.hybrid.as_ref().unwrap().classical_id)
                    .unwrap();
                let expect = costs.total_ms() + model.resolve(classical).unwrap().total_ms();
                assert!((hc.total_ms() - expect).abs() < 1e-12, "{name}: {}", hybrid.id);
            }
        }
    }
}

#[test]
fn zero_file_is_all_zero_and_example_is_not() {
    let catalog = Catalog::shipped();
    let zero = load("zero.costs");
    let example = load("example.costs");
    let mut example_total = 0.0;
    for spec in catalog.entries() {
        assert_eq!(zero.resolve(spec).unwrap().total_ms(), 0.0);
        example_total += example.resolve(spec).unwrap().total_ms();
    }
    assert!(example_total > 0.0);
}
