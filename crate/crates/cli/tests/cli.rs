use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
schema_version = 1
seeds = [1, 2]

[generator]
kind = "gaussian"

[ensemble]
kind = "wigner"
sizes = [50]

[[assertions]]
metric = "levy"
max = 0.5
"#;

fn rmtlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmtlab")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn wigner_run_writes_report_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CONFIG);
    let out = dir.path().join("out");
    let o = rmtlab(&[
        "wigner",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["records"].as_array().unwrap().len(), 2);
    assert_eq!(report["success"], true);
    for f in ["timings.json", "law.csv", "esd_n50_s1.csv", "esd_n50_s2.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn seed_flag_replaces_the_seed_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CONFIG);
    let out = dir.path().join("out");
    let o = rmtlab(&["qq", "--config", &cfg, "--seed", "9", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seeds"], serde_json::json!([9]));
    assert!(out.join("qq_n50_s9.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", CONFIG);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(rmtlab(&[
        "wigner",
        "--config",
        &cfg,
        "--out",
        a.to_str().unwrap(),
        "--threads",
        "1"
    ])
    .status
    .success());
    assert!(rmtlab(&["wigner", "--config", &cfg, "--out", b.to_str().unwrap()])
        .status
        .success());
    let read = |d: &Path| std::fs::read(d.join("report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn failed_assertion_exits_one_and_bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let strict = write(dir.path(), "strict.toml", &CONFIG.replace("max = 0.5", "max = 1e-9"));
    let o = rmtlab(&["wigner", "--config", &strict, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));

    let typo = write(dir.path(), "typo.toml", &CONFIG.replace("sizes", "size"));
    let o = rmtlab(&["wigner", "--config", &typo, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field"));

    let o = rmtlab(&["covariance", "--config", &write(dir.path(), "c.toml", CONFIG)]);
    assert_eq!(o.status.code(), Some(2), "covariance verb on a Wigner ensemble");
}

#[test]
fn all_verbs_are_listed() {
    let help = String::from_utf8(rmtlab(&["--help"]).stdout).unwrap();
    for verb in [
        "wigner",
        "covariance",
        "limit-curve",
        "swap-diagnostic",
        "conditions",
        "qq",
    ] {
        assert!(help.contains(verb), "{verb}");
    }
}
