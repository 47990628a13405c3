use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fuzzyloop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzyloop"))
        .current_dir(dir)
        .env_remove("FUZZYLOOP_CACHE_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn statuses(report: &Value) -> Vec<(u64, String)> {
    report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["id"].as_u64().unwrap(), e["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn tables_respect_lmax() {
    let dir = TempDir::new().unwrap();
    let out = fuzzyloop(dir.path(), &["tables", "--lmax", "2", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("jacobi: pass"));
    let table = json(&dir.path().join("o/poisson_table_l2.json"));
    let entries = table["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        for key in ["l1", "l2", "l3"] {
            assert!(e[key].as_u64().unwrap() <= 2);
        }
    }
    assert!(dir.path().join("o/cache/symbols_k2_l2.json").exists());
    assert!(dir.path().join("o/cache/symbols_k8_l2.json").exists());
    assert!(!dir.path().join("o/cache/symbols_k16_l2.json").exists());
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = TempDir::new().unwrap();
    let args = ["tables", "--lmax", "2", "--kmax", "4", "--out", "o"];
    assert!(fuzzyloop(dir.path(), &args).status.success());
    let path = dir.path().join("o/cache/symbols_k4_l2.json");
    let mut cache = json(&path);
    let first = &mut cache["entries"][0];
    let n: i64 = first["re_num"].as_str().unwrap().parse().unwrap();
    first["re_num"] = Value::String((n + 1).to_string());
    fs::write(&path, cache.to_string()).unwrap();
    let out = fuzzyloop(dir.path(), &args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
}

#[test]
fn cache_dir_env_override() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fuzzyloop"))
        .current_dir(dir.path())
        .env("FUZZYLOOP_CACHE_DIR", "elsewhere")
        .args(["tables", "--lmax", "1", "--kmax", "2", "--out", "o"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("elsewhere/symbols_k2_l1.json").exists());
    assert!(!dir.path().join("o/cache").exists());
}

#[test]
fn verify_reports_every_criterion() {
    let dir = TempDir::new().unwrap();
    let out = fuzzyloop(dir.path(), &["verify", "--out", "o"]);
    let report = json(&dir.path().join("o/report.json"));
    let st = statuses(&report);
    assert_eq!(st.len(), 15);
    // The commutator rate is still pre-asymptotic at these levels.
    let failed: Vec<u64> = st.iter().filter(|(_, s)| s == "fail").map(|(id, _)| *id).collect();
    assert_eq!(failed, vec![11]);
    assert_eq!(out.status.code(), Some(1));
    let text = fs::read_to_string(dir.path().join("o/report.txt")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL 11")));
    assert!(text.lines().any(|l| l.starts_with("PASS  1")));

    let rendered = fuzzyloop(dir.path(), &["report", "--out", "o"]);
    assert!(rendered.status.success());
    assert_eq!(String::from_utf8_lossy(&rendered.stdout), text);
}

#[test]
fn zero_tolerance_fails_only_that_rate_and_twist_off_skips() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"tolerances": {"norm_slope": 0}}"#).unwrap();
    let out = fuzzyloop(
        dir.path(),
        &["verify", "--config", "c.json", "--twist", "off", "--out", "o"],
    );
    assert_eq!(out.status.code(), Some(1));
    let st = statuses(&json(&dir.path().join("o/report.json")));
    for (id, s) in st {
        let expected = match id {
            8 | 15 => "skipped",
            11 | 13 => "fail",
            _ => "pass",
        };
        assert_eq!(s, expected, "criterion {id}");
    }
}

const SU2_LOOPS: &str = r#"{"k_list": [1, 2, 3, 5, 8, 13, 40],
  "loops": {"f": [{"n": 1, "l": 1, "m": 0, "re": "1/2"}, {"n": -1, "l": 1, "m": 0, "re": "1/2"}],
            "g": [{"n": 1, "l": 1, "m": 0, "im": "-1/2"}, {"n": -1, "l": 1, "m": 0, "im": "1/2"}]}}"#;

#[test]
fn su2_sweep_is_exact_under_exact_normalization() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), SU2_LOOPS).unwrap();
    assert!(fuzzyloop(dir.path(), &["sweep", "--config", "c.json", "--out", "o"]).status.success());
    let csv = fs::read_to_string(dir.path().join("o/sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,normalization,value,limit,deviation,seconds"));
    let exact: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect::<Vec<_>>()).filter(|c| c[1] == "exact").collect();
    assert_eq!(exact.len(), 7);
    for row in exact {
        assert_eq!(row[2].parse::<f64>().unwrap(), 1.0, "k = {}", row[0]);
        assert_eq!(row[5], "");
    }
}

#[test]
fn default_sweep_rate_and_determinism() {
    let dir = TempDir::new().unwrap();
    assert!(fuzzyloop(dir.path(), &["sweep", "--out", "a"]).status.success());
    assert!(fuzzyloop(dir.path(), &["sweep", "--out", "b", "--jobs", "2"]).status.success());
    for f in ["sweep.csv", "sweep.json"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f} differs between runs"
        );
    }
    let summary = json(&dir.path().join("a/sweep.json"));
    let slope: f64 = summary["slopes"]["cubic"].as_str().unwrap().parse().unwrap();
    assert!((-1.3..=-0.7).contains(&slope), "slope {slope}");
}

#[test]
fn empty_k_list_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"k_list": []}"#).unwrap();
    let out = fuzzyloop(dir.path(), &["sweep", "--config", "c.json", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k_list is empty"));
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"kmax": 3}"#).unwrap();
    let out = fuzzyloop(dir.path(), &["tables", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_without_artifacts_errors() {
    let dir = TempDir::new().unwrap();
    let out = fuzzyloop(dir.path(), &["report", "--out", "nothing"]);
    assert_eq!(out.status.code(), Some(2));
}
