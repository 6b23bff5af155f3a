use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn lef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lef")).args(args).env_remove("LEF_MAX_DIM").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn root_system() {
    let out = lef(&["root-system", "--type", "A2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cartan_matrix"], serde_json::json!([[2, -1], [-1, 2]]));
}

#[test]
fn cohomology_matches_kostant() {
    let out = lef(&["cohomology", "--type", "A2", "--levi", "1", "--weight", "1,1", "--duality"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kostant_match"], true);
    assert_eq!(v["euler_identity"], true);
    assert_eq!(v["duality"], true);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);
}

#[test]
fn module_dimension_and_cap() {
    let v = json(&lef(&["module", "--type", "A2", "--weight", "1,1", "--matrices"]));
    assert_eq!(v["dimension"], 8);
    assert_eq!(v["matrices"].as_object().unwrap().len(), 8);
    let capped = Command::new(env!("CARGO_BIN_EXE_lef"))
        .args(["module", "--type", "A2", "--weight", "1,1"])
        .env("LEF_MAX_DIM", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn spectral_rank_one() {
    let v = json(&lef(&["spectral", "--type", "A1", "--weight", "0", "--tau", "trivial"]));
    let table = v["table"].as_array().unwrap();
    let pairs: Vec<(String, i64)> =
        table.iter().map(|e| (e["lambda"][0].as_str().unwrap().to_string(), e["m"].as_i64().unwrap())).collect();
    assert_eq!(pairs, vec![("-1".to_string(), 1), ("0".to_string(), -1)]);
}

#[test]
fn geometric_and_balance() {
    let v = json(&lef(&["geometric", "--ledger", &fixture("ledger.json"), "--type", "A1"]));
    let c = v["c_gamma"][0][0].as_f64().unwrap();
    assert!((c - 2.0 / (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    let args = [
        "balance",
        "--spectral",
        &fixture("spectral.json"),
        "--ledger",
        &fixture("ledger.json"),
        "--testfn",
        &fixture("testfn.json"),
    ];
    let mut tight = args.to_vec();
    tight.extend(["--tolerance", "1e-12"]);
    let out = lef(&tight);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["residual_norm"].as_f64().unwrap() < 1e-12);
}

#[test]
fn balance_mismatch_is_a_verification_failure() {
    let out = lef(&[
        "balance",
        "--spectral",
        &fixture("spectral.json"),
        "--ledger",
        &fixture("ledger.json"),
        "--testfn",
        &fixture("testfn.json"),
        "--type",
        "A1",
        "--tau",
        "trivial",
        "--tolerance",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn euler_characteristics() {
    let v = json(&lef(&["chi-r", "--betti", "1,2,1", "--r", "1", "--transfer"]));
    assert_eq!(v["transfer"]["chi_r"], v["transfer"]["chi_0_base"]);
    let v = json(&lef(&["chi-gen", "--input", &fixture("hc.json"), "--covolume", "3.5", "--a-covolume", "7/2"]));
    assert_eq!(v["harish_chandra_constant"]["sign"], -1);
    assert_eq!(v["chi_r"]["coefficient"], "1");
}

#[test]
fn verify_comb_and_determinism() {
    let out = lef(&["verify", "comb", "--max", "12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["entries"][0]["cases"], 169);
    let args = ["verify", "all", "--types", "A1,A2", "--max-coord", "1", "--seed", "7", "--betti-len", "4"];
    let a = lef(&args);
    let b = lef(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["summary"]["failed"], 0);
}

#[test]
fn verify_spin_reports_per_m() {
    let v = json(&lef(&["verify", "spin", "--max-m", "6"]));
    let per_m = v["entries"][0]["details"].as_array().unwrap();
    assert_eq!(per_m.len(), 6);
    assert!(per_m.iter().all(|e| e["spin_square_holds"] == true && e["epsilon_twist_holds"] == true));
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = fixture("verify_config.json");
    let v = json(&lef(&["verify", "--config", &cfg]));
    assert_eq!(v["seed"], 5);
    assert_eq!(v["entries"][0]["check"], "comb");
    let v = json(&lef(&["verify", "--config", &cfg, "--max", "3", "--seed", "9"]));
    assert_eq!(v["seed"], 9);
    assert_eq!(v["entries"][0]["cases"], 16);
}

#[test]
fn empty_selection() {
    let out = lef(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["total"], 0);
}

#[test]
fn malformed_input_exits_two() {
    for args in [
        vec!["root-system", "--type", "Q7"],
        vec!["root-system", "--bogus"],
        vec!["verify", "nope"],
        vec!["verify", "kostant", "--types", "E8"],
        vec!["cohomology", "--type", "A2", "--levi", "3", "--weight", "1,1"],
        vec!["module", "--type", "A2", "--weight", "1,x"],
        vec!["spectral", "--type", "A1", "--weight", "0", "--tau", "1"],
        vec!["am-tilde", "--a-eigs", "", "--m-eigs", "1"],
    ] {
        let out = lef(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
