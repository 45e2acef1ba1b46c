use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn charvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charvar"))
        .args(args)
        .env_remove("CHARVAR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("charvar-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn rank_one_is_one() {
    let out = charvar(&["epoly", "1", "1", "1", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["polynomial"]["coefficients"], serde_json::json!(["1"]));
}

#[test]
fn epoly_csv_rows() {
    let out = charvar(&["epoly", "2", "1", "1", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,coefficient"));
    // degree (2g-1)(n²-1) - n + 1 = 2, monic
    assert_eq!(text.lines().last(), Some("2,1"));
}

#[test]
fn constants_table() {
    let out = charvar(&["constants", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["result"]["rows"].as_array().unwrap().clone();
    let c = |s: u64| {
        rows.iter()
            .find(|r| r["A"] == 1 && r["tau"] == "{(1):4}" && r["s"] == s)
            .map(|r| r["C"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(c(1), "0");
    assert_eq!(c(4), "6");
}

#[test]
fn count_matches_library() {
    let out = charvar(&["count", "2", "1", "2", "0", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let coeffs = &json(&out)["result"]["polynomial"]["coefficients"];
    assert_eq!(coeffs, &serde_json::json!(["1", "4", "1"]));
}

#[test]
fn isotypic_routes_agree() {
    let out = charvar(&["isotypic", "2", "1", "1", "1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["agree"], true);
}

#[test]
fn verify_mirror_passes() {
    let out = charvar(&["verify", "mirror", "--n-max", "4", "--g", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["result"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn verify_without_cases_fails() {
    // no nice element of SL_2(F_5) has fourth-power eigenvalues
    let out = charvar(&["verify", "twisted-count", "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["first_failure"]["name"], "applicable cases");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(charvar(&["epoly", "3", "2", "1", "1"]).status.code(), Some(2));
    assert_eq!(charvar(&["count", "2", "1", "2", "1"]).status.code(), Some(2));
    assert_eq!(charvar(&["epoly"]).status.code(), Some(2));
    assert_eq!(charvar(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn oracle_fixtures_pass() {
    for name in ["quaternion.fixture", "heisenberg.fixture"] {
        let out = charvar(&["oracle", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn oracle_reports_first_failure() {
    let out = charvar(&["oracle", &fixture("wrong_expectation.fixture")]);
    assert_eq!(out.status.code(), Some(1));
    let f = &json(&out)["first_failure"];
    assert_eq!(f["name"], "count g=1 a=1/0 b=0/1");
    assert_eq!(f["expected"], "5");
    assert_eq!(f["actual"], "4");
}

#[test]
fn cache_does_not_change_output() {
    let dir = scratch("cache");
    let path = fixture("heisenberg.fixture");
    let plain = charvar(&["oracle", &path]);
    let cache = dir.to_string_lossy().into_owned();
    let cold = charvar(&["oracle", &path, "--cache", &cache]);
    let stored = std::fs::read_dir(&dir).unwrap().count();
    let warm = charvar(&["oracle", &path, "--cache", &cache]);
    assert_eq!(stored, 1);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    assert_eq!(warm.status.code(), Some(0));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn corrupt_cache_is_rebuilt() {
    let dir = scratch("corrupt");
    let path = fixture("quaternion.fixture");
    let cache = dir.to_string_lossy().into_owned();
    let first = charvar(&["oracle", &path, "--cache", &cache]);
    for entry in std::fs::read_dir(&dir).unwrap() {
        std::fs::write(entry.unwrap().path(), "{ not json").unwrap();
    }
    let second = charvar(&["oracle", &path, "--cache", &cache]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn caps_exit_3() {
    let out = charvar(&["oracle", &fixture("heisenberg.fixture"), "--max-group-order", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["kind"], "cap_exceeded");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [&["constants", "6"][..], &["epoly", "4", "2", "2", "3"], &["verify", "c-scaling", "--n-max", "5"]] {
        let first = charvar(args);
        let second = charvar(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = scratch("out");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("e.json");
    let out = charvar(&["epoly", "2", "2", "1", "1", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["command"], "epoly");
    let _ = std::fs::remove_dir_all(&dir);
}
