use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ncjet::io::{AlgebraSpec, CalculusSpec, ModuleSpec};
use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn ncjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncjet")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn assert_golden(args: &[&str], file: &str) {
    let out = ncjet(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let want = std::fs::read_to_string(golden(file)).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{file} differs from the committed golden file");
}

#[test]
fn reports_match_golden_files() {
    assert_golden(&["report", "quaternion"], "quaternion.json");
    assert_golden(&["report", "infinitesimal"], "infinitesimal.json");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for ex in ["quaternion", "infinitesimal"] {
        assert_eq!(ncjet(&["report", ex]).stdout, ncjet(&["report", ex]).stdout);
    }
}

#[test]
fn report_contents() {
    let q = stdout_json(&ncjet(&["report", "quaternion"]));
    let diffs: Vec<&str> = q["differentials"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(diffs.contains(&"dk = -j di + i dj"), "{diffs:?}");
    assert_eq!(q["dims"]["N_{i,j}"], 4);
    let k = stdout_json(&ncjet(&["report", "infinitesimal"]));
    assert_eq!(k["dims"]["J1"], 3);
    let unknown = ncjet(&["report", "octonions"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn jets_command() {
    let (a, c) = (data("quaternions.json"), data("quaternion_ij.json"));
    let args = ["jets", "--algebra", &a, "--calculus", &c, "--flavor", "holonomic", "--order", "3"];
    let out = stdout_json(&ncjet(&args));
    assert_eq!(out["dims"], serde_json::json!([4, 12, 16, 16]));
    assert!(out["sequences"].as_array().unwrap().iter().all(|s| s["left_exact"] == true
        && s["mid_exact"] == true
        && s["right_exact"] == true));
    // the cwd-independent golden is produced from the same data files
    let got = stdout_json(&ncjet(&args));
    let want: Value = serde_json::from_str(&std::fs::read_to_string(golden("jets_quaternion_holonomic.json")).unwrap()).unwrap();
    assert_eq!(got, want);

    let sh = stdout_json(&ncjet(&["jets", "--algebra", &a, "--calculus", &c, "--flavor", "semiholonomic", "--order", "2"]));
    assert_eq!(sh["dims"], serde_json::json!([4, 12, 28]));
}

#[test]
fn validate_command() {
    let out = ncjet(&["validate", "--algebra", &data("quaternions.json"), "--calculus", &data("quaternion_ij.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["left_free_basis"], serde_json::json!(["di", "dj"]));
    for alg in ["dual_numbers.json", "upper_triangular.json"] {
        assert_eq!(ncjet(&["validate", "--algebra", &data(alg), "--calculus", &data("universal.json")]).status.code(), Some(0));
    }
}

#[test]
fn tor_command() {
    let p = data("point.json");
    let out = ncjet(&["tor", "--algebra", &data("dual_numbers.json"), "--M", &p, "--N", &p, "--depth", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["dims"], serde_json::json!([1, 1, 1, 1, 1, 1]));
}

#[test]
fn diffop_command() {
    let (a, c) = (data("quaternions.json"), data("quaternion_ij.json"));
    for (op, order) in [("laplacian.json", 2), ("left_k.json", 2)] {
        let out = ncjet(&[
            "diffop", "--algebra", &a, "--calculus", &c, "--op", &data(op), "--flavor", "holonomic", "--max-order", "4",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["order"], order, "{op}");
    }
}

#[test]
fn spencer_command() {
    let out = ncjet(&["spencer", "--algebra", &data("quaternions.json"), "--calculus", &data("quaternion_ij.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["grades"], serde_json::json!([4, 8, 12, 16]));
    for h in 1..=3 {
        assert_eq!(v["spencer"][format!("{h},2")]["H"], 0);
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ncjet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let bad = bad.display().to_string();
    assert_eq!(ncjet(&["validate", "--algebra", &bad]).status.code(), Some(2));
    assert_eq!(ncjet(&["validate", "--algebra", "/nonexistent/alg.json"]).status.code(), Some(2));
    assert_eq!(ncjet(&["jets", "--algebra", &data("quaternions.json")]).status.code(), Some(2));

    // a non-associative table: i·j = 0
    let mut spec: AlgebraSpec = serde_json::from_str(&std::fs::read_to_string(data("quaternions.json")).unwrap()).unwrap();
    spec.mult[1][2] = vec!["0".into(); 4];
    let broken = scratch("broken.json");
    std::fs::write(&broken, serde_json::to_string(&spec).unwrap()).unwrap();
    let broken = broken.display().to_string();
    let out = ncjet(&["validate", "--algebra", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["algebra"]["associative"], false);
    let out = ncjet(&["jets", "--algebra", &broken, "--calculus", &data("universal.json")]);
    assert_eq!(out.status.code(), Some(1));

    // t acting invertibly violates t² = 0
    let m = scratch("bad_module.json");
    std::fs::write(&m, r#"{"dim": 1, "left_action": [[["1"]], [["1"]]]}"#).unwrap();
    let out = ncjet(&["validate", "--algebra", &data("dual_numbers.json"), "--module", &m.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_same_document() {
    let path = scratch("report.json");
    let out = ncjet(&["report", "infinitesimal", "--out", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), ncjet(&["report", "infinitesimal"]).stdout);
}

#[test]
fn emitted_specs_round_trip() {
    let q = stdout_json(&ncjet(&["report", "quaternion"]));
    let alg: AlgebraSpec = serde_json::from_value(q["algebra"].clone()).unwrap();
    let built = alg.build().unwrap();
    assert_eq!(AlgebraSpec::from_algebra(&built), alg);
    let calc: CalculusSpec = serde_json::from_value(q["calculus"].clone()).unwrap();
    assert_eq!(CalculusSpec::from_calculus(&calc.build(&built).unwrap()), calc);
    let point: ModuleSpec = serde_json::from_str(&std::fs::read_to_string(data("point.json")).unwrap()).unwrap();
    let k2 = ncjet::algebra::Algebra::dual_numbers();
    let m = point.build(&k2).unwrap();
    let back: ModuleSpec = serde_json::from_str(&serde_json::to_string(&ModuleSpec::from_module(&m)).unwrap()).unwrap();
    assert_eq!(back, point);
}
