use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use helixkit::curves::CurveFile;
use serde_json::Value;
use tempfile::TempDir;

fn helixkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helixkit"))
        .args(args)
        .env_remove("HELIX_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn generate(dir: &TempDir, name: &str, kind: &str, params: &str, nodes: usize) -> PathBuf {
    let path = dir.path().join(name);
    let nodes = nodes.to_string();
    let out = helixkit(&[
        "generate",
        "--kind",
        kind,
        "--params",
        params,
        "--nodes",
        &nodes,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn generated_helix_file() {
    let dir = TempDir::new().unwrap();
    let h = generate(&dir, "h.json", "circular-helix", "a=3,b=4", 2000);
    let json = read_json(&h);
    assert_eq!(json["space"], "euclidean:3");
    assert_eq!(json["param"], "arclength");
    assert_eq!(json["samples"].as_array().unwrap().len(), 2000);
}

#[test]
fn generated_clifford_file_lives_on_the_unit_three_sphere() {
    let dir = TempDir::new().unwrap();
    let c = generate(&dir, "c.json", "clifford-s3", "theta=0.7853981633974483,p=1,q=2", 4000);
    let json = read_json(&c);
    assert_eq!(json["space"], "sphere:3:1");
    for p in json["samples"].as_array().unwrap() {
        let r2: f64 = p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap().powi(2)).sum();
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn generate_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("x.json");
    let out = out_path.to_str().unwrap();
    for args in [
        vec!["generate", "--kind", "circular-helix", "--params", "a=0,b=4", "--out", out],
        vec!["generate", "--kind", "circular-helix", "--params", "a=3", "--out", out],
        vec!["generate", "--kind", "circular-helix", "--params", "a=3,b=x", "--out", out],
        vec!["generate", "--kind", "circular-helix", "--params", "a=3,b=4,z=1", "--out", out],
        vec!["generate", "--kind", "trefoil", "--params", "a=3", "--out", out],
        vec!["generate", "--kind", "circular-helix", "--params", "a=3,b=4", "--nodes", "10", "--out", out],
    ] {
        assert_eq!(code(&helixkit(&args)), 2, "{args:?}");
    }
    assert!(!out_path.exists());
}

#[test]
fn analyze_helix_reports_the_slope() {
    let dir = TempDir::new().unwrap();
    let h = generate(&dir, "h.json", "circular-helix", "a=3,b=4", 2000);
    let report = dir.path().join("report.json");
    let out = helixkit(&["analyze", "--in", h.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let json = read_json(&report);
    assert_eq!(json["verdict"], "Helix");
    assert!((json["angle_mean"].as_f64().unwrap() - 0.8).abs() < 1e-6);
    assert_eq!(json["tolerances"]["tol"].as_f64().unwrap(), 1e-3);
}

#[test]
fn analyze_clifford_curve_is_a_helix() {
    let dir = TempDir::new().unwrap();
    let c = generate(&dir, "c.json", "clifford-s3", "theta=0.7853981633974483,p=1,q=2", 4000);
    let out = helixkit(&["analyze", "--in", c.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["verdict"], "Helix");
}

#[test]
fn analyze_perturbed_helix_is_not_a_helix() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "p.json", "perturbed-circular-helix", "a=3,b=4,eps=0.01", 2000);
    let out = helixkit(&["analyze", "--in", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"], "NonHelix");
}

#[test]
fn analyze_rejects_too_few_samples() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("two.json");
    fs::write(&path, r#"{"space":"euclidean:3","param":"generic","samples":[[0,0,0],[1,0,0]]}"#).unwrap();
    let out = helixkit(&["analyze", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn analyze_reports_io_and_format_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&helixkit(&["analyze", "--in", missing.to_str().unwrap()])), 3);
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"space\": \"euclidean:3\",").unwrap();
    let out = helixkit(&["analyze", "--in", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn analyze_straight_line_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("line.json");
    let samples: Vec<String> = (0..200).map(|i| format!("[{},0,0]", i as f64 * 0.05)).collect();
    fs::write(
        &path,
        format!(r#"{{"space":"euclidean:3","param":"arclength","samples":[{}]}}"#, samples.join(",")),
    )
    .unwrap();
    let out = helixkit(&["analyze", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "Degenerate");
    assert!(json["residual_rms"].is_null());
    assert!(json["cause"].is_string());
}

#[test]
fn tolerance_comes_from_flag_then_environment() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "p.json", "perturbed-circular-helix", "a=3,b=4,eps=0.01", 2000);
    let p = p.to_str().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_helixkit"))
        .args(["analyze", "--in", p])
        .env("HELIX_TOL", "100")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["tolerances"]["tol"].as_f64().unwrap(), 100.0);
    let out = Command::new(env!("CARGO_BIN_EXE_helixkit"))
        .args(["analyze", "--in", p, "--tol", "1e-3"])
        .env("HELIX_TOL", "100")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert_eq!(code(&helixkit(&["analyze", "--in", p, "--tol", "-1"])), 2);
}

#[test]
fn dump_profiles_writes_frenet_and_harmonic_tables() {
    let dir = TempDir::new().unwrap();
    let h = generate(&dir, "h.json", "circular-helix", "a=3,b=4", 500);
    let report = dir.path().join("r.json");
    let out = helixkit(&[
        "analyze",
        "--in",
        h.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--dump-profiles",
    ]);
    assert_eq!(code(&out), 0);
    let frenet = read_json(&dir.path().join("r.frenet.json"));
    assert_eq!(frenet["s"].as_array().unwrap().len(), 500);
    let k1 = frenet["curvatures"][250][0].as_f64().unwrap();
    assert!((k1 - 0.12).abs() < 1e-8);
    let harmonic = read_json(&dir.path().join("r.harmonic.json"));
    let h1 = harmonic["H"][250][0].as_f64().unwrap();
    assert!((h1 - 0.75).abs() < 1e-6);
}

#[test]
fn verify_t7_on_a_helix() {
    let dir = TempDir::new().unwrap();
    let h = generate(&dir, "h.json", "circular-helix", "a=3,b=4", 2000);
    let out = helixkit(&["verify", "--in", h.to_str().unwrap(), "--theorem", "T7"]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["pass"], true);
    assert!(json["max_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_expanded_criterion_on_a_w_curve() {
    let dir = TempDir::new().unwrap();
    let w = generate(&dir, "w.json", "w-curve-5", "a=0.8,p=0.5,b=0.4,q=1", 4000);
    let w = w.to_str().unwrap();
    for name in ["T8≡C9", "T8=C9"] {
        let out = helixkit(&["verify", "--in", w, "--theorem", name]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["theorem"], "T8≡C9");
    }
}

#[test]
fn verify_inapplicable_cases_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("e4.json");
    let samples: Vec<String> = (0..600)
        .map(|i| {
            let t = -6.0 + 12.0 * i as f64 / 599.0;
            format!("[{},{},{},{}]", t.cos(), t.sin(), (2.0 * t).cos(), 0.3 * t * t)
        })
        .collect();
    fs::write(
        &path,
        format!(r#"{{"space":"euclidean:4","param":"generic","samples":[{}]}}"#, samples.join(",")),
    )
    .unwrap();
    let out = helixkit(&["verify", "--in", path.to_str().unwrap(), "--theorem", "T8≡C9"]);
    assert_eq!(code(&out), 2);

    let p = generate(&dir, "p.json", "perturbed-circular-helix", "a=3,b=4,eps=0.01", 1000);
    assert_eq!(code(&helixkit(&["verify", "--in", p.to_str().unwrap(), "--theorem", "T7"])), 2);
    assert_eq!(code(&helixkit(&["verify", "--in", p.to_str().unwrap(), "--theorem", "T99"])), 2);
}

#[test]
fn report_survives_a_reserialized_curve_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let h = generate(&dir, "h.json", "clifford-s3", "theta=0.6,p=1,q=2", 1500);
    let first = helixkit(&["analyze", "--in", h.to_str().unwrap()]);

    let copy = dir.path().join("copy.json");
    CurveFile::load(&h).unwrap().save(&copy).unwrap();
    let second = helixkit(&["analyze", "--in", copy.to_str().unwrap()]);

    assert_eq!(code(&first), code(&second));
    assert_eq!(first.stdout, second.stdout);
}
