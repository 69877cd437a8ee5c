//! CLI behavior: exit codes, config ingestion, parameter echo, and output
//! schemas.

use std::path::PathBuf;
use std::process::{Command, Output};

fn dsoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsoc")).args(args).output().expect("spawn dsoc")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout).lines().map(str::to_string).collect()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("dsoc-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn budget_breakdown_sums_to_power_ratio() {
    let out = dsoc(&["budget", "--planet", "mars"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "quantity,linear,db");

    let field = |line: &str, idx: usize| -> f64 {
        line.split(',').nth(idx).unwrap().parse().unwrap()
    };
    let tx_dbw = field(&lines[1], 2);
    let rx_dbw = field(lines.last().unwrap(), 2);
    let factor_sum: f64 = lines[2..lines.len() - 1].iter().map(|l| field(l, 2)).sum();
    assert!(
        (factor_sum - (rx_dbw - tx_dbw)).abs() < 1e-6,
        "factor dB sum {factor_sum} vs power ratio {}",
        rx_dbw - tx_dbw
    );
}

#[test]
fn run_echoes_resolved_parameters_before_results() {
    let out = dsoc(&["planets"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    for key in ["wavelength_nm = 1550", "receiver_diameter_m = 4", "blocking_time_ns = 50"] {
        assert!(stderr.contains(key), "echo missing `{key}`:\n{stderr}");
    }
}

#[test]
fn config_file_overrides_preset() {
    let path = temp_file("override.cfg", "receiver_diameter_m = 10\nslot_time_ns = 2\n");
    let out = dsoc(&["--config", path.to_str().unwrap(), "capacity", "--pr-w", "1e-12", "--pn-w", "1e-16"]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("receiver_diameter_m = 10"));
    // slot_time_s column reflects the overridden 2 ns slot
    let lines = stdout_lines(&out);
    assert!(lines[1].contains("2.000000000e-9"), "{}", lines[1]);
}

#[test]
fn invalid_config_exits_2() {
    let path = temp_file("bad.cfg", "no_such_key = 1\n");
    let out = dsoc(&["--config", path.to_str().unwrap(), "planets"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_key"));
}

#[test]
fn invalid_flag_value_exits_2() {
    let out = dsoc(&["capacity", "--pr-w", "-3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = dsoc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_design_exits_1() {
    // A 1 Gbps target at picowatt-free power levels cannot be met.
    let out = dsoc(&["design", "--target-bps", "1e9", "--pr-w", "1e-15", "--pn-w", "1e-14"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn feasible_design_exits_0_and_reports_solution() {
    let out = dsoc(&["design", "--target-bps", "1e6", "--pr-w", "4.5e-12", "--pn-w", "1.2e-16"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "order,slot_time_s,code_rate,achieved_rate_bps,capacity_bps,required_power_w,feasible,meets_target"
    );
    assert!(lines[1].ends_with("true,true"), "{}", lines[1]);
}

#[test]
fn sweep_emits_the_pinned_schema() {
    let out = dsoc(&["sweep", "--points", "3", "--orders", "16", "--diameters-m", "4"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "distance_m,receiver_diameter_m,order,slot_time_s,pr_w,pn_w,capacity_bps,regime"
    );
    assert_eq!(lines.len(), 1 + 3);
    for line in &lines[1..] {
        let regime = line.split(',').next_back().unwrap();
        assert!(
            ["noise_limited", "quantum_limited", "bandwidth_limited"].contains(&regime),
            "{line}"
        );
    }
}

#[test]
fn out_flag_writes_file_identical_to_stdout() {
    let path = std::env::temp_dir().join(format!("dsoc-out-{}.csv", std::process::id()));
    let to_file = dsoc(&["planets", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let file_bytes = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let to_stdout = dsoc(&["planets"]);
    assert_eq!(file_bytes, to_stdout.stdout);
}

#[test]
fn simulate_ser_row_carries_parameters_and_seed() {
    let out = dsoc(&[
        "simulate", "ser", "--orders", "4,16", "--ks", "1", "--trials", "20000", "--seed", "9",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "order,ks_photons,kb_photons,trials,seed,estimate,stderr,errors");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("4,") && lines[1].contains(",20000,9,"));
    assert!(lines[2].starts_with("16,") && lines[2].contains(",20000,10,"));
}

#[test]
fn oam_raster_schema() {
    let out = dsoc(&["oam", "--l", "1", "--raster", "--samples", "8", "--phi-samples", "8"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "r_meters,phi_rad,intensity_normalized,phase_rad");
    assert_eq!(lines.len(), 1 + 64);
}

#[test]
fn fom_requires_exactly_one_distance() {
    let both = dsoc(&[
        "fom", "--distance-au", "1", "--distance-m", "1e11", "--rate-bps", "1e6", "--aperture-m",
        "4", "--power-w", "4",
    ]);
    assert_eq!(both.status.code(), Some(2));
    let neither = dsoc(&["fom", "--rate-bps", "1e6", "--aperture-m", "4", "--power-w", "4"]);
    assert_eq!(neither.status.code(), Some(2));
}
