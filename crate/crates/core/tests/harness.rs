//! Config-driven runs end to end.

use rmtlab::harness::{run, ExperimentConfig, Verb};

const BASE: &str = r#"
schema_version = 1
seeds = [1, 2, 3]

[generator]
kind = "gaussian"

[ensemble]
kind = "wigner"
sizes = [40, 80]
"#;

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

#[test]
fn unknown_keys_are_rejected() {
    for bad in [
        BASE.replace("[ensemble]", "[ensemble]\nszes = [3]"),
        BASE.replace("kind = \"gaussian\"", "kind = \"gaussian\"\nsigma = 2.0"),
        format!("{BASE}\n[metrics]\nlevi = true\n"),
        format!("{BASE}\ncolour = \"red\"\n"),
        format!("{BASE}\n[limit]\nkind = \"semicircle\"\nradius = 2\n"),
    ] {
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("unknown"), "{err}");
    }
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(ExperimentConfig::from_toml(&BASE.replace("seeds = [1, 2, 3]", "seeds = []")).is_err());
    assert!(ExperimentConfig::from_toml(&BASE.replace("sizes = [40, 80]", "sizes = [0]")).is_err());
    assert!(ExperimentConfig::from_toml(&BASE.replace("schema_version = 1", "schema_version = 7")).is_err());
    let cov = BASE.replace("kind = \"wigner\"", "kind = \"covariance\"");
    assert!(ExperimentConfig::from_toml(&cov).is_err(), "covariance without p or y");
}

#[test]
fn seed_order_does_not_change_the_report() {
    let a = run(&cfg(BASE), Verb::Wigner, Some(2)).unwrap();
    let b = run(&cfg(&BASE.replace("[1, 2, 3]", "[3, 1, 2]")), Verb::Wigner, Some(3)).unwrap();
    assert_eq!(a.report.records, b.report.records);
    assert_eq!(a.report.aggregates, b.report.aggregates);
    assert!(a.report.success);
    let keys: Vec<_> = a.report.records.iter().map(|r| (r.size, r.seed)).collect();
    assert_eq!(keys, vec![(40, 1), (40, 2), (40, 3), (80, 1), (80, 2), (80, 3)]);
}

#[test]
fn records_do_not_depend_on_the_rest_of_the_sweep() {
    let full = run(&cfg(BASE), Verb::Wigner, None).unwrap();
    let single = run(
        &cfg(&BASE.replace("[1, 2, 3]", "[2]").replace("[40, 80]", "[80]")),
        Verb::Wigner,
        None,
    )
    .unwrap();
    let r = full
        .report
        .records
        .iter()
        .find(|r| r.size == 80 && r.seed == 2)
        .unwrap();
    assert_eq!(r, &single.report.records[0]);
}

#[test]
fn output_dir_does_not_change_the_hash_but_seeds_do() {
    let a = cfg(BASE);
    let b = cfg(&format!("{BASE}\n[output]\ndir = \"elsewhere\"\n"));
    let c = cfg(&BASE.replace("[1, 2, 3]", "[1, 2]"));
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), c.hash());
    assert_eq!(a.hash().len(), 64);
}

#[test]
fn failing_assertion_and_failed_records_mark_the_run() {
    let strict = format!("{BASE}\n[[assertions]]\nmetric = \"levy\"\nmax = 1e-9\n");
    let r = run(&cfg(&strict), Verb::Wigner, None).unwrap().report;
    assert!(r.records.iter().all(|x| x.ok));
    assert!(!r.success);
    assert!(r.assertions.iter().all(|a| !a.passed));

    // a Marchenko-Pastur limit without a ratio fails every Wigner record
    let broken = format!("{BASE}\n[limit]\nkind = \"marchenko_pastur\"\n");
    let r = run(&cfg(&broken), Verb::Wigner, None).unwrap().report;
    assert!(r.records.iter().all(|x| !x.ok && x.error.is_some()));
    assert!(!r.success);
    assert!(r.aggregates.iter().all(|a| a.failed == 3));
}

#[test]
fn verbs_check_the_ensemble() {
    assert!(run(&cfg(BASE), Verb::Covariance, None).is_err());
    assert!(run(&cfg(BASE), Verb::SwapDiagnostic, None).is_err(), "no swap section");
}

#[test]
fn written_files_have_the_documented_headers() {
    let text = r#"
schema_version = 1
seeds = [5]

[generator]
kind = "panel"
omega = 1.0
beta = 0.3

[ensemble]
kind = "covariance"
sizes = [60]
y = 4.0
"#;
    let out = run(&cfg(text), Verb::Qq, None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    out.write(dir.path()).unwrap();
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    assert!(read("esd_n60_s5.csv").starts_with("t,F\n"));
    assert!(read("law.csv").starts_with("x,pdf,cdf\n"));
    let qq = read("qq_n60_s5.csv");
    assert!(qq.starts_with("q_law,lambda\n"));
    // 1 - 1/y = 3/4 of the law's quantiles sit on the atom at zero
    let zeros = qq
        .lines()
        .skip(1)
        .filter(|l| l.starts_with("0,") || l.starts_with("0e0,"))
        .count();
    assert_eq!(zeros, 180);

    let report: serde_json::Value = serde_json::from_str(&read("report.json")).unwrap();
    assert_eq!(report["verb"], "qq");
    assert_eq!(report["records"][0]["rows"], 240);
    assert!((report["records"][0]["metrics"]["atom_fraction"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    let timings: serde_json::Value = serde_json::from_str(&read("timings.json")).unwrap();
    assert!(timings["total_seconds"].as_f64().unwrap() >= 0.0);
    assert!(!read("report.json").contains("seconds"));
}

#[test]
fn limit_curve_writes_density_and_law() {
    let out = run(
        &cfg(&format!("{BASE}\n[limit]\nkind = \"semicircle\"\n")),
        Verb::LimitCurve,
        None,
    )
    .unwrap();
    let names: Vec<&str> = out.artifacts.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["density.csv", "law.csv"]);
    let density = &out.artifacts[0].1;
    assert!(density.starts_with("x,f\n"));
    assert!(out.report.success && out.report.records.is_empty());
}

#[test]
fn conditions_and_swap_verbs_report_diagnostics() {
    let text = r#"
schema_version = 1
seeds = [1]

[generator]
kind = "martingale_fill"
omega = 1.0
beta = 0.3

[ensemble]
sizes = [16]

[metrics]
lindeberg = [0.2]

[diagnostics.swap]
n = 8
a = 2
replicates = 5
l3_samples = 200

[diagnostics.perturbation_check]
n = 6
instances = 50

[diagnostics.derivative_check]
sizes = [8, 16]
z = [0.0, 2.0]
"#;
    let c = run(&cfg(text), Verb::Conditions, None).unwrap().report;
    assert!(c.success, "{:?}", c.assertions);
    assert!(c.diagnostics.contains_key("perturbation") && c.diagnostics.contains_key("derivatives"));
    assert!(c.records[0].metrics.contains_key("lindeberg@0.2"));
    assert!(c.records[0].metrics.contains_key("truncated@0.2"));

    let s = run(&cfg(text), Verb::SwapDiagnostic, None).unwrap().report;
    assert_eq!(s.records.len(), 5);
    assert!(s.success, "{:?}", s.assertions);
    assert!(s.records.iter().all(|r| r.metrics["swap_residual"] < 1e-10));
}

#[test]
fn example_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 8);
}
