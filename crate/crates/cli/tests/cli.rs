use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_zakharov-trig");

fn zak(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("ZAK_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a CSV file, after the format, params and header lines.
fn data_rows(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# zakharov-trig v1");
    assert!(lines[1].starts_with("# params: "));
    lines[3..].iter().map(|s| s.to_string()).collect()
}

const SMALL: [&str; 6] = ["--K", "64", "--L", "62.83185307179586", "--CFL", "1"];

#[test]
fn help_lists_every_flag_with_a_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = zak(&["run", "--help"], dir.path());
    assert!(o.status.success());
    let help = stdout(&o);
    for flag in [
        "--config", "--scheme", "--problem", "--K", "--L", "--tau", "--CFL", "--T", "--sample-every",
        "--s-norm", "--B", "--C", "--dealias", "--coupled", "--out-dir", "--taus", "--times",
        "--init-file",
    ] {
        let line = help
            .lines()
            .find(|l| l.trim_start().starts_with(flag))
            .unwrap_or_else(|| panic!("{flag} missing from help:\n{help}"));
        assert!(line.contains("[default:"), "{line}");
    }
    let top = zak(&["--help"], dir.path());
    assert!(top.status.success());
    for sub in ["run", "converge", "soliton", "conserve", "selftest"] {
        assert!(stdout(&top).contains(sub));
    }
}

#[test]
fn bad_invocations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "--bogus", "1"][..],
        &["frobnicate"],
        &["run", "--tau", "0.1", "--CFL", "2"],
        &["run", "--K", "100"],
        &["run", "--scheme", "third"],
        &["run", "--tau", "0.3"],
        &["run", "--problem", "custom"],
        &["selftest", "10"],
    ] {
        let o = zak(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn run_to_time_zero_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["run", "--T", "0", "--scheme", "second"];
    args.extend(SMALL);
    let o = zak(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = data_rows(&dir.path().join("run_second.csv"));
    assert_eq!(rows.len(), 1);
    let fields: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 0.0);
    assert_eq!((fields[3], fields[4]), (0.0, 0.0));
    assert_eq!(data_rows(&dir.path().join("run_second_final.csv")).len(), 64);
}

#[test]
fn out_dir_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let o = Command::new(BIN)
        .args(["conserve", "--scheme", "first", "--T", "0.05"])
        .args(SMALL)
        .current_dir(dir.path())
        .env("ZAK_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(target.join("conserve_first.csv").is_file());

    let flag = dir.path().join("from_flag");
    let o = Command::new(BIN)
        .args(["conserve", "--scheme", "first", "--T", "0.05", "--out-dir"])
        .arg(&flag)
        .args(SMALL)
        .current_dir(dir.path())
        .env("ZAK_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(flag.join("conserve_first.csv").is_file());
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nscheme=first\nK=32\nL=62.83185307179586\ntau=0.01\nT=0.1\nout_dir=out\n").unwrap();
    let o = zak(&["conserve", "--config", "run.cfg", "--K", "64", "--T", "0.05"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/conserve_first.csv")).unwrap();
    let params = text.lines().nth(1).unwrap();
    assert!(params.contains(" K=64 "), "{params}");
    assert!(params.contains(" T=0.05 "), "{params}");
    assert!(params.contains(" tau=0.01 "), "{params}");
    assert_eq!(data_rows(&dir.path().join("out/conserve_first.csv")).len(), 6);

    fs::write(&cfg, "K=32\nnonsense=1\n").unwrap();
    let o = zak(&["conserve", "--config", "run.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nonsense"));
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = vec!["soliton", "--K", "64", "--L", "62.83185307179586", "--tau", "0.05", "--T", "0.2", "--times", "0,0.1,0.2"];
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let mut a = args.clone();
        a.extend(["--out-dir", sub]);
        let o = zak(&a, dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        let mut files: Vec<_> = fs::read_dir(dir.path().join(sub))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        assert_eq!(files.len(), 6);
        outputs.push(files.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn snapshots_landing_on_one_step_share_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["soliton", "--scheme", "second", "--T", "0.2", "--times", "0,0.15,0.2"];
    args.extend(SMALL);
    let o = zak(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(dir.path().join("soliton_second_t0.2.csv").is_file());
}

#[test]
fn converge_prints_fitted_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let o = zak(
        &[
            "converge", "--problem", "example1", "--K", "32", "--T", "0.1", "--taus", "0.02,0.01,0.005,0.0025",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for scheme in ["first", "second"] {
        let line = out
            .lines()
            .find(|l| l.starts_with(&format!("{scheme}: slope")))
            .unwrap_or_else(|| panic!("{out}"));
        let slope: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!(slope.is_finite() && slope > 0.5, "{line}");
        assert_eq!(data_rows(&dir.path().join(format!("converge_{scheme}.csv"))).len(), 4);
    }
    let o = zak(&["converge", "--scheme", "rk4", "--K", "32"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn custom_problem_reads_a_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["run", "--T", "0.1", "--scheme", "second", "--out-dir", "first"];
    args.extend(SMALL);
    assert!(zak(&args, dir.path()).status.success());
    let o = zak(
        &[
            "run", "--problem", "custom", "--init-file", "first/run_second_final.csv", "--scheme", "second",
            "--T", "0.1", "--CFL", "1", "--out-dir", "second",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = data_rows(&dir.path().join("second/run_second.csv"));
    assert!(rows.len() > 1);
}

#[test]
fn selftest_of_one_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = zak(&["selftest", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("[PASS] criterion 1:"));
}

#[test]
fn soliton_convergence_orders_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = zak(&["converge", "--problem", "soliton", "--scheme", "both", "--T", "1"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let slope = |scheme: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(&format!("{scheme}: slope"))).unwrap();
        line.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    assert!((0.85..=1.15).contains(&slope("first")), "{out}");
    assert!((1.75..=2.25).contains(&slope("second")), "{out}");
}
