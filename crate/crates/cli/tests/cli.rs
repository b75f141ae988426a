use std::process::{Command, Output};

fn tops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tops")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn wigner_at_unit_spacing() {
    let o = tops(&["predict", "--kind", "wigner", "--s", "1.0"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let expected = std::f64::consts::FRAC_PI_2 * (-std::f64::consts::FRAC_PI_4).exp();
    assert!((v - expected).abs() < 1e-15);
}

#[test]
fn predict_tables() {
    let o = tops(&["predict", "--kind", "poisson", "--s", "0,1,2"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "0,1");
    let o = tops(&["predict", "--kind", "entropy", "--alpha", "2", "--lambda", "0,1", "--n1", "11", "--n2", "241"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("0,0\n"));
    let o = tops(&["predict", "--kind", "marcenko-pastur", "--x", "1"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 3f64.sqrt() / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
    let o = tops(&["predict", "--kind", "perturbative", "--lambda", "0.02", "--s", "1"]);
    assert!(o.status.success());
}

#[test]
fn uncoupled_lambda_is_zero() {
    let o = tops(&["lambda", "--j1", "20", "--j2", "20", "--eps", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn usage_and_runtime_errors() {
    let o = tops(&["lambda", "--j1", "3", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = tops(&["lambda", "--j1", "3", "--eps", "0.1", "--lambda", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tops(&["lambda", "--j1", "3", "--eps", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = tops(&["spacing", "--j1", "40", "--j2", "40", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_dim"));
    let o = tops(&["lambda", "--j1", "3", "--j2", "3", "--lambda", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("solve_epsilon"));
}

#[test]
fn spacing_run_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = tops(&["spacing", "--j1", "10", "--j2", "10", "--lambda", "0.1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(&out).unwrap();
    let header = table.lines().next().unwrap();
    assert!(header.contains("ks_wigner") && header.contains("ks_poisson"));
    assert_eq!(table.lines().count(), 2);
    let hist = std::fs::read_to_string(dir.path().join("r_hist.csv")).unwrap();
    assert_eq!(hist.lines().count(), 51);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "kind = \"spacing\"\nepsilon_grid = [0.0]\n\n[system]\ntype = \"ensemble\"\nsymmetry = \"cue\"\ncoupling = \"diagonal_phases\"\nn1 = 4\nn2 = 4\n",
    )
    .unwrap();
    let o = tops(&[
        "rmt-check",
        "--config",
        cfg.to_str().unwrap(),
        "--eps",
        "0.5",
        "--realizations",
        "10",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("\"rmt_validation\"") && text.contains("lambda_monte_carlo"));
    let o = tops(&["spacing", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
