//! The `convexwave` binary: stage composition, determinism, exit codes.

use std::path::Path;
use std::process::{Command, Output};

use convexwave::grid::UniformGrid1D;
use convexwave::io;
use convexwave::preprocess::DerivedData;

fn convexwave(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convexwave"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(output: &Output) {
    assert!(
        output.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn stages_compose_and_match_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let staged = dir.path().join("staged");
    let whole = dir.path().join("whole");

    ok(&convexwave(&["simulate"], &staged));
    let noisy = staged.join("g_noisy.csv");
    ok(&convexwave(&["invert", noisy.to_str().unwrap()], &staged));
    let r = staged.join("r.csv");
    ok(&convexwave(&["recover", r.to_str().unwrap()], &staged));
    // Derived data written by `invert` is itself valid input.
    let derived = staged.join("derived.csv");
    let again = dir.path().join("again");
    ok(&convexwave(&["invert", derived.to_str().unwrap()], &again));

    ok(&convexwave(&["pipeline"], &whole));
    for name in ["g_noisy.csv", "derived.csv", "r.csv", "descent.csv", "c.csv"] {
        assert_eq!(read(&staged.join(name)), read(&whole.join(name)), "{name} differs");
    }
    assert_eq!(read(&again.join("r.csv")), read(&whole.join("r.csv")));

    let report: serde_json::Value = serde_json::from_str(&read(&whole.join("report.json"))).unwrap();
    let err = report["relative_error"].as_f64().unwrap();
    assert!(err <= 0.10, "relative error {err}");
}

#[test]
fn pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["pipeline", "--max-iter", "300", "--seed", "9"];
    ok(&convexwave(&args, &a));
    ok(&convexwave(&args, &b));
    for name in ["g.csv", "g_noisy.csv", "derived.csv", "r.csv", "descent.csv", "c.csv"] {
        assert_eq!(read(&a.join(name)), read(&b.join(name)), "{name} differs");
    }
}

#[test]
fn homogeneous_model_has_no_scattered_signal() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("flat.json");
    std::fs::write(&model, r#"{"kind": "gaussians", "amplitude": 0.0, "bumps": []}"#).unwrap();
    ok(&convexwave(
        &["simulate", "--noise", "0", "--model", model.to_str().unwrap()],
        dir.path(),
    ));
    let data = io::read_boundary_data(&dir.path().join("g.csv")).unwrap();
    assert!(data.g1.max_abs() < 1e-12);
    assert!(data.g0.max_abs() < 1e-12);
}

#[test]
fn zero_derived_data_inverts_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let grid = UniformGrid1D::spanning(0.0, 3.0, 301).unwrap();
    let zero = DerivedData::from_samples(grid, vec![0.0; 301], vec![0.0; 301]).unwrap();
    let path = dir.path().join("zero.csv");
    io::write_derived(&path, &zero).unwrap();
    ok(&convexwave(&["invert", path.to_str().unwrap()], dir.path()));
    let r = io::read_potential(&dir.path().join("r.csv")).unwrap();
    assert!(r.values().iter().all(|v| *v == 0.0));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = convexwave(&["selftest"], dir.path());
    ok(&out);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 7);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")), "{text}");
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    let out = convexwave(&["simulate", "--cbar", "0.9"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cbar"));

    let out = convexwave(&["recover", "missing.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lamda": 3}"#).unwrap();
    let out = convexwave(&["--config", cfg.to_str().unwrap(), "simulate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lamda"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,r\n0,1\n0.1,oops\n").unwrap();
    let out = convexwave(&["recover", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column `r`"));
}

#[test]
fn zero_radar_trace_is_a_no_signal_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.txt");
    let mut text = String::from("# dt_ns=0.133,scale=1e-7,background_lo=3,background_hi=5,polarity=negative\n");
    text.push_str(&"0\n".repeat(80));
    std::fs::write(&path, text).unwrap();
    let out = convexwave(&["experimental", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no signal"));
}

#[test]
fn wavefield_is_written_in_grid_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.json");
    std::fs::write(
        &cfg,
        r#"{"forward": {"ny": 200, "nt": 400, "source_exponent": 1e4}, "noise": {"level": 0}}"#,
    )
    .unwrap();
    ok(&convexwave(
        &["--config", cfg.to_str().unwrap(), "simulate", "--wavefield"],
        dir.path(),
    ));
    let u = io::read_grid_fn_2d(&dir.path().join("u.csv")).unwrap();
    assert_eq!(u.grid.shape(), (201, 401));
    assert!((u.grid.x.start() + 1.1).abs() < 1e-12);
    let g = io::read_boundary_data(&dir.path().join("g.csv")).unwrap();
    assert_eq!(g.g0.samples.len(), 401);
}
