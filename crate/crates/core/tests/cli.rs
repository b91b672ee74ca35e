use std::path::Path;
use std::process::{Command, Output};

fn nsgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsgap")).args(args).output().expect("binary runs")
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().skip(1).map(String::from).collect()
}

#[test]
fn reproduce_fig1_desk_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = nsgap(&["reproduce", "fig1", "--scale", "desk", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let gap = data_rows(&dir.path().join("fig1_gap.csv"));
    let acc = data_rows(&dir.path().join("fig1_acceptance.csv"));
    // 19 step sizes × 4 values of λ
    assert_eq!(gap.len(), 76);
    assert_eq!(acc.len(), 76);
    let header = std::fs::read_to_string(dir.path().join("fig1_gap.csv")).unwrap();
    assert!(header.starts_with(
        "model,kernel,lambda,h,h_max,admissible,trial_count,failures,mean_gap,stderr_gap,theory_lower_bound\n"
    ));
}

#[test]
fn same_seed_gives_identical_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.cfg");
    std::fs::write(&cfg, "n_trials = 3\nchain_length = 2000\nburn_in = 100\nlambda_grid = 1, 4\nh_span_below = 10\nh_span_above = 2\n").unwrap();
    let mut contents = Vec::new();
    for (sub, workers) in [("a", "1"), ("b", "3")] {
        let out_dir = dir.path().join(sub);
        let out = Command::new(env!("CARGO_BIN_EXE_nsgap"))
            .env("NSGAP_WORKERS", workers)
            .args(["reproduce", "fig2", "--config", cfg.to_str().unwrap(), "--seed", "11"])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        contents.push((
            std::fs::read(out_dir.join("fig2_gap.csv")).unwrap(),
            std::fs::read(out_dir.join("fig2_acceptance.csv")).unwrap(),
        ));
    }
    assert_eq!(contents[0], contents[1]);
}

#[test]
fn sample_then_estimate_gap() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let t = trace.to_str().unwrap();
    let out = nsgap(&["sample", "--model", "gaussian1d", "-d", "1", "--lambda", "0", "--step", "1.0", "--steps", "20000", "--out", t]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let est = nsgap(&["estimate-gap", "--trace", t, "--model", "gaussian1d", "--lambda", "0"]);
    assert!(est.status.success(), "{}", String::from_utf8_lossy(&est.stderr));
    let text = String::from_utf8(est.stdout).unwrap();
    assert!(text.starts_with("function_label,iact,truncation_lag\n"));
    assert!(text.contains("log_density"), "{text}");
    let gap: f64 = text
        .lines()
        .last()
        .unwrap()
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("gap_estimate="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(gap > 0.05 && gap < 1.0, "{gap}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(nsgap(&["nonsense"]).status.code(), Some(1));
    assert_eq!(nsgap(&["reproduce", "fig9"]).status.code(), Some(1));
    assert_eq!(nsgap(&["sample", "--step", "0.1", "--out", "x.csv", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(nsgap(&[]).status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_two() {
    let out = nsgap(&["estimate-gap", "--trace", "/nonexistent/trace.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nsgap(&["bounds", "--kernel", "mala", "-d", "10", "-M", "1", "-L", "1", "-h", "1e-6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("-m"));
}

#[test]
fn bad_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "model = lasso\nalpha_decay = -1\n").unwrap();
    let out = nsgap(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha_decay"));
}
