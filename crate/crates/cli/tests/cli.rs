//! End-to-end tests of the command-line surface: exit codes, output
//! formats, determinism, and record round-trips.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2-bethe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_passes_and_is_byte_identical_under_fixed_seed() {
    let args = ["verify", "--samples", "2", "--seed", "3"];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "report must be reproducible");
    let text = stdout(&first);
    assert!(text.starts_with("check,samples,failures,pass"));
    assert!(text.contains("GYBE,2,0,true"));
}

#[test]
fn verify_corrupt_flag_fails_gybe_with_exit_one() {
    let out = run(&["verify", "--samples", "2", "--corrupt", "gybe"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("GYBE,2,2,false"));
    assert!(text.contains("UNIT_B,2,0,true"));
}

#[test]
fn invalid_sector_is_a_usage_error() {
    let out = run(&["solve", "--sector", "bogus", "--qn", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_records_round_trip_and_satisfy_the_energy_identity() {
    let out = run(&[
        "solve", "--L", "1", "--gs", "0.1", "--gl", "0.1", "--qn", "0,0,0", "--qn", "0,-1,0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = 0;
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["schema"], "g2-bethe.solution/1");
        assert_eq!(record["converged"], true);
        // Full-precision round trip: the parsed momenta reproduce the
        // energy bit for bit.
        let k: Vec<f64> = record["k"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        let energy = record["energy"].as_f64().unwrap();
        assert_eq!(energy, k.iter().map(|x| x * x).sum::<f64>());
        assert!(record["residual"].as_f64().unwrap() < 1e-10);
        lines += 1;
    }
    assert_eq!(lines, 2);
}

#[test]
fn solve_free_momenta_in_table_format() {
    let out = run(&["solve", "--qn", "1,-1,0", "--format", "table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("sector,m1,m2,nP"));
    let row = rows.next().unwrap();
    assert!(row.starts_with("++,1,-1,0,true"));
    // Free momenta at L = 1: k = π(−1, 1, 0).
    let fields: Vec<&str> = row.split(',').collect();
    let k1: f64 = fields[5].parse().unwrap();
    assert!((k1 + std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn scan_emits_one_row_per_step_plus_header() {
    let out = run(&[
        "scan", "--gs", "0.3", "--gl", "0.3", "--steps", "4", "--qn", "0,0,0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "header plus five rows");
    assert_eq!(lines[0], "gs,gl,k1,k2,k3,energy,converged");
    // Repulsive sweep of the ground tuple: energies non-decreasing.
    let energies: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    for pair in energies.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12);
    }
}

#[test]
fn scan_zero_length_range_is_a_single_row() {
    let out = run(&["scan", "--gs", "0.1", "--gl", "0.1", "--steps", "0", "--qn", "0,0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn oracle_reports_matches_with_convergence_column() {
    let out = run(&[
        "oracle", "--nmax", "6", "--levels", "2", "--mmax", "1", "--format", "table",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.contains("relative_deviation_next"));
    let first = lines.next().unwrap();
    let dev: f64 = first.split(',').nth(7).unwrap().parse().unwrap();
    assert!(dev < 0.05, "coarse-basis deviation {dev}");
}

#[test]
fn wavecheck_line_case_passes() {
    let out = run(&[
        "wavecheck", "--k", "0.8,-0.4,0.3", "--gs", "0.3", "--gl", "0.2", "--points", "20",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().count() >= 13, "12 hyperplanes plus energy row");
    assert!(!text.contains("false"));
}

#[test]
fn wavecheck_circle_mode_checks_matching() {
    let out = run(&[
        "wavecheck",
        "--k",
        "0.8,-0.4,0.3",
        "--gs",
        "0.1",
        "--gl",
        "0.1",
        "--points",
        "20",
        "--sector",
        "trivial",
        "--qn",
        "0,-1,0",
        "--format",
        "records",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("g2-bethe.wavecheck-circle/1"));
    assert!(text.contains("\"pass\":true"));
}
