use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn hetspin(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hetspin")).args(args).output().unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn condition<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["result"]["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no condition `{name}`"))
}

#[test]
fn tables_reproduce_every_row() {
    let r = hetspin(&["tables"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|row| row["match"] == true));
    let counts: Vec<u64> =
        doc["result"]["clifford_counts"]["computed"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).collect();
    assert_eq!(counts, [1, 2, 3, 4, 5, 6, 7]);
    assert_eq!(doc["outcome"], "pass");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["conventions"]["plane_orientation"], -1);
}

#[test]
fn tables_single_row() {
    let r = hetspin(&["tables", "--row", "L=1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["computed"]["stabilizer_dim"], 29);
    assert!(doc["result"].get("clifford_counts").is_none());
}

#[test]
fn corrupted_catalog_fails_with_diff() {
    let r = hetspin(&["tables", "--catalog", &fixture("corrupted_catalog.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("L=1: stabilizer_dim expected 28 got 29"), "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["outcome"], "fail");
    let matches: Vec<bool> =
        doc["result"]["rows"].as_array().unwrap().iter().map(|row| row["match"].as_bool().unwrap()).collect();
    assert_eq!(matches, [false, true, true]);
}

#[test]
fn unknown_row_is_an_input_error() {
    let r = hetspin(&["tables", "--row", "L=7"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unknown catalog row"));
}

#[test]
fn bilinears_of_the_spin7_spinor() {
    let r = hetspin(&["bilinears", "1+e_{1234}"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["result"]["counts_by_degree"][0], 1);
    let kappa = &doc["result"]["forms"]["1"][0]["form"]["components"];
    let k0 = kappa["0"].as_str().unwrap();
    let k5 = kappa["5"].as_str().unwrap();
    assert_eq!(kappa.as_object().unwrap().len(), 2);
    assert_eq!(format!("-{k0}"), k5);
    assert_eq!(doc["result"]["isotropy"]["dim"], 29);
}

#[test]
fn bilinears_of_the_su3_pair() {
    let r = hetspin(&["bilinears", "1", "e_{15}"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["result"]["spinors"].as_array().unwrap().len(), 4);
    assert_eq!(doc["result"]["isotropy"]["dim"], 8);
    assert_eq!(doc["result"]["isotropy"]["catalog_match"], "SU3");
    assert_eq!(doc["result"]["counts_by_degree"][0], 4);
}

#[test]
fn bilinears_reject_bad_spinors() {
    for bad in ["0", "e_1", "1+e_{", "e_{11}"] {
        let r = hetspin(&["bilinears", bad]);
        assert_eq!(r.code, 2, "{bad}");
        assert!(r.stderr.starts_with("error:"), "{bad}: {}", r.stderr);
    }
}

#[test]
fn kse_check_null_flux() {
    let spec = fixture("flux_null.json");
    let r = hetspin(&["kse-check", "--spec", &spec]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["result"]["arithmetic"], "exact");
    assert_eq!(doc["result"]["joint_kernel_dim"], 8);
    assert_eq!(doc["result"]["gaugino_kernel_dim"], 16);
    assert_eq!(hetspin(&["kse-check", "--spec", &spec, "--expect", "8"]).code, 0);
    let wrong = hetspin(&["kse-check", "--spec", &spec, "--expect", "4"]);
    assert_eq!(wrong.code, 1);
    assert!(wrong.stderr.contains("expected 4 got 8"));
}

#[test]
fn kse_check_on_a_row() {
    let r = hetspin(&["kse-check", "--spec", &fixture("flux_h123.json"), "--row", "L=1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["result"]["joint_kernel_dim"], 0);
    assert_eq!(r.json()["result"]["space_dim"], 1);
}

#[test]
fn verify_string_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..3).map(|k| dir.path().join(format!("r{k}.json")).display().to_string()).collect();
    let spec = fixture("string.json");
    for (path, seed) in paths.iter().zip(["7", "7", "8"]) {
        let r = hetspin(&["verify", "string", "--spec", &spec, "--seed", seed, "--report", path]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert!(r.stdout.is_empty());
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    assert_ne!(bytes[0], bytes[2]);

    let doc: Value = serde_json::from_slice(&bytes[0]).unwrap();
    assert_eq!(doc["config"]["seed"], 7);
    assert_eq!(doc["config"]["resolved"]["grid"]["samples"], 200);
    assert!(condition(&doc, "gravitino")["max_residual"].as_f64().unwrap() < 1e-7);
    assert!(condition(&doc, "control: wrong lightcone chirality")["max_residual"].as_f64().unwrap() > 1e-2);
    assert_eq!(condition(&doc, "R8: transverse flux")["pass"], true);
}

#[test]
fn verify_su2_instanton_includes_the_structure_conditions() {
    let r = hetspin(&["verify", "su2-instanton", "--spec", &fixture("su2_instanton.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    for name in ["fineqn", "closeH", "SU2: torsion", "SU2: dilaton and Lee form", "SU2: curvature", "instanton number"] {
        assert_eq!(condition(&doc, name)["pass"], true, "{name}");
    }
}

#[test]
fn verify_product_group_passes() {
    let r = hetspin(&["verify", "product-group", "--spec", &fixture("product_group.json"), "--tol", "1e-5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["config"]["tol"], 1e-5);
}

#[test]
fn guarded_points_are_skipped() {
    let r = hetspin(&["verify", "string", "--spec", &fixture("string.json"), "--grid", &fixture("guard_grid.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let skipped = r.json()["result"]["skipped"].clone();
    let idx: Vec<u64> = skipped.as_array().unwrap().iter().map(|s| s["index"].as_u64().unwrap()).collect();
    assert_eq!(idx, [1, 2]);
    assert!(skipped[0]["reason"].as_str().unwrap().contains("guard"));
}

#[test]
fn tight_tolerance_is_a_residual_failure() {
    let r = hetspin(&["verify", "string", "--spec", &fixture("string.json"), "--tol", "1e-30"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("FAIL field equations"), "{}", r.stderr);
    assert_eq!(r.json()["outcome"], "fail");
}

#[test]
fn malformed_spec_reports_the_line() {
    let r = hetspin(&["verify", "string", "--spec", &fixture("malformed.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn invalid_spec_values_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("neg.json");
    std::fs::write(&spec, r#"{"rho": -1}"#).unwrap();
    let r = hetspin(&["verify", "su2-instanton", "--spec", &spec.display().to_string()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rho"), "{}", r.stderr);
}

#[test]
fn fd_step_override_is_recorded() {
    let r = hetspin(&[
        "verify",
        "string",
        "--spec",
        &fixture("string.json"),
        "--grid",
        &fixture("guard_grid.json"),
        "--fd-step",
        "2e-3",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["config"]["resolved"]["spec"]["fd"]["step"], 2e-3);
}
