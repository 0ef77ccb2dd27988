use std::path::Path;
use std::process::{Command, Output};

fn randprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randprep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_toy(dir: &Path) -> String {
    let path = dir.join("toy.txt");
    std::fs::write(&path, format!("{}\n0.1\n0.1\n0\n", 0.98f64.sqrt())).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gen_synthetic_proportions() {
    let out = randprep(&["gen", "synthetic", "--kind", "geometric", "--rate", "0.5", "--dim", "4", "--signs", "positive"]);
    assert!(out.status.success());
    let v = json(&out);
    let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (k, want) in [1.0, 0.5, 0.25, 0.125].iter().enumerate() {
        assert!((vals[k] / vals[0] - want).abs() < 1e-15);
    }
}

#[test]
fn gen_tfim_writes_dense_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tfim11.state");
    let out = randprep(&["gen", "tfim", "--n", "11", "--j", "1.0", "--h", "1.0", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals.len(), 2048);
    assert!(vals.iter().all(|x| x.as_f64().unwrap() != 0.0));
}

#[test]
fn invalid_parameters_exit_with_usage_code() {
    let out = randprep(&["gen", "tfim", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(randprep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(randprep(&["--help"]).status.code(), Some(0));
    let bad = randprep(&["gen", "synthetic", "--kind", "geometric", "--rate", "1.5", "--dim", "4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn analyze_toy_report() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_toy(dir.path());
    let out = randprep(&["analyze", "--state", &state, "--threshold", "0.2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["lemma_bound"].as_f64().unwrap() - 0.039_409_828_093_302_75).abs() < 1e-12);
    assert!((v["S"].as_f64().unwrap() - 0.2).abs() < 1e-15);
    assert!(v["dist_rand"].as_f64().unwrap() < v["dist_det"].as_f64().unwrap());

    let low = json(&randprep(&["analyze", "--state", &state, "--threshold", "0.05"]));
    assert_eq!(low["dist_det"].as_f64().unwrap(), 0.0);
    assert_eq!(low["dist_rand"].as_f64().unwrap(), 0.0);

    let empty = randprep(&["analyze", "--state", &state, "--threshold", "5"]);
    assert_ne!(empty.status.code(), Some(0));
}

#[test]
fn analyze_writes_ensemble_summary() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_toy(dir.path());
    let summary = dir.path().join("ens.json");
    let out = randprep(&["analyze", "--state", &state, "--threshold", "0.2", "--ensemble", summary.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 1.02f64.sqrt()).abs() < 1e-14);
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_outputs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("g.json");
    let gen = randprep(&[
        "gen", "synthetic", "--kind", "geometric", "--rate", "0.9", "--dim", "256", "-o", state.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let args = ["sweep", "--state", state.to_str().unwrap(), "--thresholds", "1e-4:1e-1:8"];
    let a = randprep(&args);
    let b = randprep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[0].starts_with("threshold,k_kept"));

    let one = randprep(&["sweep", "--state", state.to_str().unwrap(), "--thresholds", "0.01"]);
    assert_eq!(stdout(&one).lines().count(), 2);
    let bad = randprep(&["sweep", "--state", state.to_str().unwrap(), "--thresholds", "0.1:0.01:3"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sample_report_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_toy(dir.path());
    let args = ["sample", "--state", &state, "--threshold", "0.2", "--shots", "100000", "--seed", "42"];
    let a = randprep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, randprep(&args).stdout);
    let v = json(&a);
    let est = v["estimate"].as_f64().unwrap();
    let exact = v["exact_value"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    assert!((est - exact).abs() <= 5.0 * se);
    let total: u64 = v["draw_counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 100_000);

    let obs = dir.path().join("id.json");
    std::fs::write(&obs, r#"{"k_qubits": 1, "rows": [[1, 0], [0, 1]]}"#).unwrap();
    let v = json(&randprep(&[
        "sample", "--state", &state, "--threshold", "0.2", "--shots", "50", "--seed", "1", "--observable",
        obs.to_str().unwrap(),
    ]));
    assert!((v["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert!(v["std_error"].as_f64().unwrap() < 1e-14);

    std::fs::write(&obs, r#"{"k_qubits": 1, "rows": [[1, 2], [0, 1]]}"#).unwrap();
    let asym = randprep(&[
        "sample", "--state", &state, "--threshold", "0.2", "--shots", "50", "--seed", "1", "--observable",
        obs.to_str().unwrap(),
    ]);
    assert_eq!(asym.status.code(), Some(1));
}

#[test]
fn resources_plans() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("g.json");
    randprep(&["gen", "synthetic", "--kind", "geometric", "--rate", "0.9", "--dim", "1024", "-o", state.to_str().unwrap()]);
    let s = state.to_str().unwrap();
    let v = json(&randprep(&["resources", "--state", s, "--tau", "1e-6", "--kind", "geometric", "--rate", "0.9"]));
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((1.8..=2.2).contains(&ratio), "{ratio}");

    let fitted = json(&randprep(&["resources", "--state", s, "--tau", "1e-6"]));
    assert_eq!(fitted["kind"], "geometric");
    assert!((fitted["rate"].as_f64().unwrap() - 0.9).abs() < 1e-6);

    let loose = json(&randprep(&["resources", "--state", s, "--tau", "0.95", "--kind", "geometric", "--rate", "0.9"]));
    assert_eq!(loose["ratio"].as_f64().unwrap(), 1.0);

    let strict = randprep(&["resources", "--state", s, "--tau", "1e-300", "--kind", "power_law", "--rate", "0.8"]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("target too strict"));
}

#[test]
fn thread_cap_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_randprep"))
            .args(["gen", "tfim", "--n", "4"])
            .env("RANDPREP_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("2").stdout);
    assert_eq!(run("0").status.code(), Some(1));
    assert_eq!(run("many").status.code(), Some(1));
}
