use std::process::{Command, Output};

fn brzeta(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_brzeta"));
    c.args(args);
    match cache {
        Some(dir) => c.env("BRZETA_CACHE_DIR", dir),
        None => c.env_remove("BRZETA_CACHE_DIR"),
    };
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn renormalised_depth_one() {
    let o = brzeta(&["--json", "zeta", "--lambda", "-1", "--renormalise", "T(s=-1)"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["renormalised"];
    assert_eq!(r["rational"]["status"], "exact");
    assert_eq!(r["rational"]["value"], "-1/12");
    assert_eq!(v["config"]["lambda"], -1);
}

#[test]
fn flatten_prints_merged_letter() {
    let o = brzeta(&["--json", "flatten", "--lambda", "1", "T(s=1)[T(s=2),T(s=3)]"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let words = v["words"].as_array().unwrap();
    assert_eq!(words.len(), 3);
    let merged = words.iter().find(|w| w["letters"].as_array().unwrap().len() == 2).unwrap();
    assert_eq!(merged["coefficient"], "1");
    assert_eq!(merged["letters"][1]["labels"], serde_json::json!([2, 3]));
    assert_eq!(merged["letters"][1]["weight"], "5");
    assert!(v["merge_policy"].as_str().unwrap().contains("add weights"));
    // the other quasi-shuffle sign
    let o = brzeta(&["flatten", "--lambda", "-1", "T(s=1)[T(s=2),T(s=3)]"], None);
    assert!(stdout(&o).contains("-1  (l=1,s=1; l=2+3,s=5)"), "{}", stdout(&o));
}

#[test]
fn algebra_suite_passes() {
    let o = brzeta(&["check", "--suite", "algebra"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 2);
}

#[test]
fn syntax_error_exit_code() {
    let o = brzeta(&["zeta", "T(s=2)[T(s=2)"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 13"));
    let o = brzeta(&["zeta", "T(l=1,s=2),T(l=1,s=3)"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_is_reproducible() {
    let args = ["--json", "zeta", "--mode", "numeric", "--renormalise", "--route", "both", "T(s=-1)[T(s=-2)]"];
    let a = brzeta(&args, None);
    let b = brzeta(&args, None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let exact = brzeta(&["--json", "zeta", "--mode", "exact", "--renormalise", "T(s=-1)[T(s=-2)]"], None);
    let e: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(e["renormalised"]["rational"]["value"], "-1/240");
    assert_eq!(v["renormalised"]["rational"]["value"], "-1/240");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "zeta", "--renormalise", "T(s=-2),T(s=-3)"];
    let first = brzeta(&args, Some(dir.path()));
    assert_eq!(first.status.code(), Some(0));
    let second = brzeta(&args, Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);
    let list = brzeta(&["cache", "list"], Some(dir.path()));
    assert!(stdout(&list).contains("1 entry"), "{}", stdout(&list));
    let clear = brzeta(&["cache", "clear"], Some(dir.path()));
    assert!(stdout(&clear).contains("removed 1 entry"));
    assert!(stdout(&brzeta(&["cache", "list"], Some(dir.path()))).contains("0 entries"));
    assert_eq!(brzeta(&["cache", "list"], None).status.code(), Some(1));
}

#[test]
fn config_file_and_inner_product() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"lambda": 1, "mode": "exact"}"#).unwrap();
    let q = dir.path().join("q.json");
    std::fs::write(&q, r#"{"entries": [[1, 2, "1/2"]]}"#).unwrap();
    let o = brzeta(
        &[
            "--json",
            "--config",
            cfg.to_str().unwrap(),
            "--q-file",
            q.to_str().unwrap(),
            "zeta",
            "--renormalise",
            "T(s=0)",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lambda"], 1);
    assert_eq!(v["renormalised"]["mode"], "exact");
    std::fs::write(&cfg, r#"{"lambda": 3}"#).unwrap();
    assert_eq!(brzeta(&["--config", cfg.to_str().unwrap(), "zeta", "T(s=0)"], None).status.code(), Some(1));
}

#[test]
fn value_at_a_point() {
    let o = brzeta(&["--json", "zeta", "--at", "1=1/10", "T(s=0)"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // ζ(-1/10) for strict sums
    let x: f64 = v["at"]["decimal"].as_str().unwrap().parse().unwrap();
    assert!((x + 0.417228040767367).abs() < 1e-12, "{x}");
}
