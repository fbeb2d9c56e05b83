use std::path::PathBuf;

use anick::bar_oracle::{bar_cohomology, finite_basis, DEFAULT_ROW_CAP};
use anick::hochschild::{cohomology, cohomology_with, validate_bimodule};
use anick::linalg::rank_fraction_free;
use anick::resolution::build_resolution;
use anick::{FiniteBimodule, QPresentation};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn compare(pres_file: &str, bimodules: &[&str]) {
    let pres = QPresentation::from_json_str(&fixture(pres_file)).unwrap();
    let alg = finite_basis(&pres).unwrap();
    let res = build_resolution(&pres, 5).unwrap();
    let mut modules: Vec<(String, FiniteBimodule)> = bimodules
        .iter()
        .map(|b| (b.to_string(), FiniteBimodule::from_json_str(&fixture(b), pres.alphabet()).unwrap()))
        .collect();
    modules.push(("generated regular".into(), alg.regular_bimodule(&pres)));
    for (name, m) in &modules {
        validate_bimodule(m, &pres).unwrap();
        let anick = cohomology(&res, m, 4).unwrap();
        let bar = bar_cohomology(&alg, m, 4, DEFAULT_ROW_CAP).unwrap();
        println!("{pres_file} / {name}: anick {:?} bar {:?}", anick.dims, bar);
        assert_eq!(anick.dims, bar, "{pres_file} with {name}");
        let reversed = cohomology(&res.with_reversed_bases(), m, 4).unwrap();
        assert_eq!(reversed.dims, anick.dims);
    }
}

#[test]
fn dual_numbers() {
    compare("dual.json", &["trivial1.json", "trivial2.json", "dual_reg.json"]);
}

#[test]
fn truncated_cubic() {
    compare("cubic.json", &["trivial1.json", "cubic_reg.json"]);
}

#[test]
fn upper_triangular() {
    compare("upper_triangular.json", &["trivial1.json", "upper_triangular_reg.json"]);
}

#[test]
fn fraction_free_ranks_agree() {
    let pres = QPresentation::from_json_str(&fixture("upper_triangular.json")).unwrap();
    let m = FiniteBimodule::from_json_str(&fixture("upper_triangular_reg.json"), pres.alphabet()).unwrap();
    let res = build_resolution(&pres, 4).unwrap();
    assert_eq!(cohomology(&res, &m, 3).unwrap(), cohomology_with(&res, &m, 3, rank_fraction_free).unwrap());
}
