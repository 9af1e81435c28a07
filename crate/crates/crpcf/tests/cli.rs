//! End-to-end checks of the `crpcf` binary: subcommands, exit codes and
//! byte-identical reruns.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crpcf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn crpcf")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crpcf-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn default_config_with(extra: &str) -> String {
    format!(
        "beacon_bytes=100\npoll_bytes=50\npayload_bytes=1024\nheader_bytes=50\n\
         sifs_us=16\ndelta_us=1\ntau_sense_us=300\ntau_switch_us=120\n\
         z_on_us=8000\nz_off_us=25000\nrate_mbps=1\nnum_sm=30\npackets_per_sm=3\n\
         num_channels=15\nseed=9\nprotocol=crpcf\n{extra}"
    )
}

#[test]
fn analytic_prints_both_protocol_reports() {
    let out = run(&["analytic", "--protocol", "pcf"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("throughput"), "{text}");
    assert!(text.contains("0.907587"), "{text}");

    let out = run(&["analytic", "--protocol", "crpcf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("expected rounds"), "{text}");
    assert!(text.contains("channel switches"), "{text}");
}

#[test]
fn simulate_honors_config_and_seed() {
    let dir = tmp_dir("simulate");
    let config = dir.join("run.conf");
    std::fs::write(&config, default_config_with("")).unwrap();

    let args = [
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed, same report");

    let c = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert_ne!(a.stdout, c.stdout, "different seed should differ");
}

#[test]
fn config_errors_exit_1() {
    let dir = tmp_dir("bad-config");
    let config = dir.join("bad.conf");
    std::fs::write(
        &config,
        default_config_with("").replace("tau_sense_us=300", "tau_sense_us=100"),
    )
    .unwrap();
    let out = run(&["analytic", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("tau_sense_us"), "{err}");

    // unreadable config path is a runtime failure, not a config failure
    let out = run(&["analytic", "--config", "/nonexistent/x.conf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_without_figure_or_block_exits_1() {
    let dir = tmp_dir("sweep-noblock");
    let config = dir.join("run.conf");
    std::fs::write(&config, default_config_with("")).unwrap();
    let out = run(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_csv_and_plot_script() {
    let dir = tmp_dir("sweep-preset");
    let csv = dir.join("fig10.csv");
    let config = dir.join("run.conf");
    std::fs::write(&config, default_config_with("")).unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--figure",
        "10",
        "--seeds",
        "2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().count(), 26, "header + 25 channel counts");
    assert!(body.starts_with("sweep_value,pcf_S_analytic"));

    let script = std::fs::read_to_string(dir.join("fig10.gp")).unwrap();
    assert!(script.contains("Number of Channels N"));
}

#[test]
fn config_driven_sweep_block_runs() {
    let dir = tmp_dir("sweep-block");
    let csv = dir.join("custom.csv");
    let config = dir.join("run.conf");
    std::fs::write(
        &config,
        default_config_with("sweep_variable=L\nsweep_values=2,4,6\nnum_seeds=2\n"),
    )
    .unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tmp_dir("repro");
    let config = dir.join("run.conf");
    std::fs::write(&config, default_config_with("")).unwrap();
    let mut bodies = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let csv = dir.join(name);
        let out = run(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--figure",
            "9",
            "--seeds",
            "3",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        bodies.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn optimize_x_reports_payload_and_boundary_state() {
    let out = run(&["optimize-x"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("optimal payload : 657 bytes"), "{text}");
    assert!(!text.contains("boundary"), "{text}");
}
