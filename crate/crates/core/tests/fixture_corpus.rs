use std::path::PathBuf;

use anick::freealg::verify_gsb;
use anick::hochschild::validate_bimodule;
use anick::{FiniteBimodule, QPresentation};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn is_bimodule(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text).unwrap().get("dim").is_some()
}

#[test]
fn every_presentation_parses_and_is_gsb() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        if is_bimodule(&text) {
            continue;
        }
        let pres = QPresentation::from_json_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(verify_gsb(&pres).is_gsb(), "{}", path.display());
        let again = QPresentation::from_json_str(&serde_json::to_string(&pres.to_json()).unwrap()).unwrap();
        assert_eq!(again.content_hash(), pres.content_hash());
        seen += 1;
    }
    assert_eq!(seen, 5);
}

#[test]
fn every_bimodule_is_valid_over_its_algebra() {
    let dir = fixtures_dir();
    let load = |name: &str| std::fs::read_to_string(dir.join(name)).unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let text = std::fs::read_to_string(&path).unwrap();
        if !is_bimodule(&text) {
            continue;
        }
        let algebras: Vec<String> = match name.strip_suffix("_reg.json") {
            Some(base) => vec![format!("{base}.json")],
            None => ["w1.json", "heisenberg.json", "dual.json", "cubic.json", "upper_triangular.json"].map(String::from).to_vec(),
        };
        for alg in algebras {
            let pres = QPresentation::from_json_str(&load(&alg)).unwrap();
            let m = FiniteBimodule::from_json_str(&text, pres.alphabet()).unwrap();
            validate_bimodule(&m, &pres).unwrap_or_else(|e| panic!("{name} over {alg}: {e}"));
        }
        seen += 1;
    }
    assert_eq!(seen, 6);
}
