use assert_cmd::Command;
use serde_json::Value;

fn cmd() -> Command {
    let mut c = Command::cargo_bin("trapfermi").unwrap();
    c.env_remove("TRAPFERMI_OUT_DIR");
    c
}

fn json(args: &[&str]) -> Value {
    let out = cmd()
        .args(args)
        .args(["--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn moments_json_has_exact_entries() {
    let v = json(&["moments", "--d", "2", "--M", "1", "--k-max", "1"]);
    let meta = &v["meta"];
    assert_eq!(meta["d"], 2);
    assert_eq!(meta["M"], 1);
    assert_eq!(meta["N0"], "3");
    assert_eq!(meta["two_m_tilde"], 5);
    assert_eq!(meta["command"], "moments");
    let k1 = &v["data"][1];
    assert_eq!(k1["k"], 1);
    assert_eq!(k1["numerator"], "5");
    assert_eq!(k1["denominator"], "3");
}

#[test]
fn meta_precedes_data() {
    let out = cmd()
        .args(["moments", "--d", "1", "--M", "2", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.find("\"meta\"").unwrap() < text.find("\"data\"").unwrap());
}

#[test]
fn lowercase_m_alias() {
    let v = json(&["moments", "--d", "2", "--m", "1", "--k-max", "1"]);
    assert_eq!(v["data"][1]["numerator"], "5");
}

fn stdout_with_code(args: &[&str], code: i32) -> String {
    let out = cmd()
        .args(args)
        .assert()
        .code(code)
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn mu_row_three_zero() {
    assert!(stdout_with_code(&["mu", "--d", "1", "--k-max", "3"], 0).contains("\n3,0,5,8,0.625\n"));
}

#[test]
fn moments_csv_has_exact_and_decimal_columns() {
    cmd()
        .args(["moments", "--d", "1", "--M", "0", "--k-max", "2"])
        .assert()
        .success()
        .stdout("k,numerator,denominator,decimal\n0,1,1,1\n1,1,2,0.5\n2,3,4,0.75\n");
}

#[test]
fn density_reports_both_routes() {
    let v = json(&["density", "--d", "3", "--M", "4", "--n-samples", "11"]);
    let rows = v["data"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert!(row["rel_diff"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn transform_starts_at_particle_number() {
    let v = json(&["transform", "--d", "2", "--M", "3", "--n-samples", "5"]);
    let first = &v["data"][0];
    assert_eq!(first["rho_hat"].as_f64().unwrap(), 10.0);
    assert!(first["ode_rel_residual"].is_null());
    assert!(v["data"][4]["ode_rel_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn edge_rows() {
    let v = json(&[
        "edge",
        "--d",
        "1",
        "--M",
        "16",
        "--s-min",
        "-1",
        "--s-max",
        "1",
        "--n-samples",
        "3",
    ]);
    for row in v["data"].as_array().unwrap() {
        assert!(row["F"].as_f64().unwrap() > 0.0);
        assert!(row["ode_rel_residual"].as_f64().unwrap() < 1e-6);
        assert!(row["gap"].as_f64().unwrap() < 0.05);
    }
}

#[test]
fn output_is_byte_identical() {
    let run = || {
        cmd()
            .args(["density", "--d", "2", "--M", "5", "--n-samples", "17"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_quick_passes() {
    let out = stdout_with_code(&["verify", "--d", "1", "--d", "2", "--quick"], 0);
    assert!(out.contains("PASS") && !out.contains("FAIL"));
}

#[test]
fn verify_failure_exits_one() {
    let out = stdout_with_code(
        &["verify", "--d", "1", "--quick", "--tol", "density_ode=0"],
        1,
    );
    assert!(out.contains("FAIL"));
}

#[test]
fn invalid_arguments_exit_two() {
    cmd().args(["moments", "--d", "0"]).assert().code(2);
    cmd().args(["density", "--n-samples", "0"]).assert().code(2);
    cmd()
        .args(["density", "--r-min", "3", "--r-max", "1"])
        .assert()
        .code(2);
    cmd().args(["edge", "--M", "2"]).assert().code(2);
    cmd().args(["edge", "--s-min", "-30"]).assert().code(2);
    cmd().args(["verify", "--tol", "bogus=1"]).assert().code(2);
    cmd().args(["moments", "--format", "xml"]).assert().code(2);
}

#[test]
fn writes_into_output_directory() {
    let dir = std::env::temp_dir().join(format!("trapfermi-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    Command::cargo_bin("trapfermi")
        .unwrap()
        .env("TRAPFERMI_OUT_DIR", &dir)
        .args([
            "moments", "--d", "1", "--M", "1", "--k-max", "1", "--format", "json",
        ])
        .assert()
        .success()
        .stdout("");
    let written = std::fs::read_to_string(dir.join("moments_d1_M1.json")).unwrap();
    let v: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["meta"]["N0"], "2");
    std::fs::remove_dir_all(&dir).unwrap();
}
