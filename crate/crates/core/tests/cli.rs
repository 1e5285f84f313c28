use std::path::Path;
use std::process::{Command, Output};

use kd_coherence::channels::{zeta_exact, OhmicParams};

fn kdnm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdnm")).args(args).output().expect("spawn kdnm")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn traj_dephasing_matches_closed_form() {
    let text = stdout(&kdnm(&[
        "traj", "--channel", "dephase1q", "--s", "3", "--omega-c", "1", "--t-max", "30", "--n", "4096",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["t", "ckd", "l1", "nc", "R"]);
    assert_eq!(rows.len(), 4096);
    let p = OhmicParams::new(3.0, 1.0).unwrap();
    for r in &rows {
        let big_r = (-2.0 * zeta_exact(r[0], &p)).exp();
        assert!((r[1] - 0.5 * big_r).abs() < 1e-6, "t={}", r[0]);
        assert!((r[4] - big_r).abs() < 1e-6);
        assert!((r[3] - 0.5 * (1.0 + big_r)).abs() < 1e-6);
    }
}

#[test]
fn traj_strong_damping_collapses_and_revives() {
    let text = stdout(&kdnm(&[
        "traj", "--channel", "damp1q", "--gamma0", "5", "--kappa", "1", "--varpi", "0", "--t-max", "10", "--n", "8192",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header.last().unwrap(), "absB");
    let ckd: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let deep_minima = ckd
        .windows(3)
        .filter(|w| w[1] <= w[0] && w[1] <= w[2] && w[1] < 1e-6)
        .count();
    assert!(deep_minima >= 1, "min ckd {}", ckd.iter().cloned().fold(1.0, f64::min));
}

#[test]
fn traj_two_qubit_dephasing_starts_at_zero() {
    let text = stdout(&kdnm(&[
        "traj", "--channel", "dephase2q", "--h1", "0.2", "--h2", "0.4", "--s", "1", "--t-max", "30", "--n", "1024",
    ]));
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows[0][0], 0.0);
    assert!(rows[0][1].abs() < 1e-15);
}

#[test]
fn sweep_dephasing_threshold() {
    let text = stdout(&kdnm(&[
        "sweep", "--channel", "dephase1q", "--param", "s", "--from", "0.5", "--to", "5", "--steps", "46",
    ]));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["paramValue", "nCkd", "nCl1"]);
    assert_eq!(rows.len(), 46);
    for r in &rows {
        if r[0] <= 2.0 + 1e-12 {
            assert!(r[1] <= 1e-8, "s={} nCkd={}", r[0], r[1]);
        }
    }
    let peak = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((2.6..=3.4).contains(&peak[0]), "peak at {}", peak[0]);
}

#[test]
fn sweep_damping_nonzero_exactly_below_two() {
    let text = stdout(&kdnm(&[
        "sweep", "--channel", "damp1q", "--param", "kappa-over-gamma0", "--from", "0.05", "--to", "3", "--steps", "60",
    ]));
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 60);
    for r in &rows {
        if r[0] < 2.0 - 1e-9 {
            assert!(r[1] > 0.0, "ratio {} gave zero", r[0]);
        } else {
            assert!(r[1] <= 1e-8, "ratio {} gave {}", r[0], r[1]);
        }
    }
}

#[test]
fn sweep_two_qubit_dephasing_nonzero_at_s1() {
    let text = stdout(&kdnm(&[
        "sweep", "--channel", "dephase2q", "--h1", "0.2", "--h2", "0.4", "--param", "s", "--from", "1", "--to", "2",
        "--steps", "2",
    ]));
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows[0][0], 1.0);
    assert!(rows[0][1] > 1e-4);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "# damping sweep\nchannel = damp1q\ngamma0 = 1\nparam = kappa\nfrom = 0.5\nto = 2.5\nsteps = 9\nn = 1024\n");
    let a = kdnm(&["sweep", "--config", cfg.to_str().unwrap()]);
    let b = kdnm(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let o = kdnm(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let bytes = std::fs::read(&out1).unwrap();
    assert_eq!(bytes, std::fs::read(&out2).unwrap());
    assert_eq!(bytes, a.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "channel = dephase1q\ns = 1\nt_max = 5\nn = 64\n");
    let from_file = stdout(&kdnm(&["traj", "--config", cfg.to_str().unwrap()]));
    let overridden = stdout(&kdnm(&["traj", "--config", cfg.to_str().unwrap(), "--s", "3"]));
    let direct = stdout(&kdnm(&["traj", "--channel", "dephase1q", "--s", "3", "--t-max", "5", "--n", "64"]));
    assert_ne!(from_file, overridden);
    assert_eq!(overridden, direct);
}

#[test]
fn svg_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plot.svg");
    let out = kdnm(&[
        "traj", "--channel", "dephase1q", "--s", "3", "--t-max", "10", "--n", "256", "--svg", svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(text.contains("<polyline") || text.contains("<path"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["traj", "--channel", "dephase1q"][..],
        &["traj", "--channel", "nope", "--s", "1"],
        &["traj", "--channel", "dephase1q", "--s", "1", "--gamma0", "2"],
        &["sweep", "--channel", "dephase1q", "--s", "1"],
        &["bogus"],
        &["check", "a9"],
    ] {
        let out = kdnm(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    let out = kdnm(&["traj", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let unwritable = dir.path().join("no/such/dir/out.csv");
    let out = kdnm(&["traj", "--channel", "dephase1q", "--s", "1", "--n", "32", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_runs_suites() {
    let out = kdnm(&["check", "kd-invariants"]);
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    let out = kdnm(&["check", "a2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
}
