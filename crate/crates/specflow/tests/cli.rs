//! End-to-end checks of the command-line interface: exit codes, file
//! artifacts, determinism, and CSV round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn specflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    fs::write(dir.join(name), contents).unwrap();
}

#[test]
fn metric_prints_quarter_for_the_perturbation_example() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sets.json",
        r#"{"s": {"space":"line","points":[{"x":-1.0,"mult":1},{"x":0.25,"mult":1}]},
            "t": {"space":"line","points":[{"x":-1.0,"mult":1}]}}"#,
    );
    let out = specflow(
        dir.path(),
        &["metric", "--input", "sets.json", "--out", "art"],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim(), "0.250000000000");
    assert!(dir.path().join("art/matching.csv").exists());
}

#[test]
fn metric_equal_sets_print_zero_and_bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "eq.json",
        r#"{"s": {"space":"circle","points":[{"x":1.0,"mult":2}]},
            "t": {"space":"circle","points":[{"x":1.0,"mult":2}]}}"#,
    );
    let out = specflow(dir.path(), &["metric", "--input", "eq.json"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "0.00000000000"
    );

    // Angle 0 violates the schema; the offending field is named.
    write(
        dir.path(),
        "bad.json",
        r#"{"s": {"space":"circle","points":[{"x":0.0,"mult":1}]},
            "t": {"space":"circle","points":[]}}"#,
    );
    let out = specflow(dir.path(), &["metric", "--input", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("\"s\""), "stderr was: {err}");
}

#[test]
fn metric_matches_library_bit_for_bit() {
    use specflow::matching::distance_d;
    use specflow::rigged::RiggedSet;
    let dir = tempfile::tempdir().unwrap();
    let s = RiggedSet::circle([(0.7, 1), (2.9, 2)]).unwrap();
    let t = RiggedSet::circle([(1.1, 1), (5.0, 1)]).unwrap();
    let doc = format!(
        r#"{{"s": {}, "t": {}}}"#,
        serde_json::to_string(&s).unwrap(),
        serde_json::to_string(&t).unwrap()
    );
    write(dir.path(), "pair.json", &doc);
    let out = specflow(dir.path(), &["metric", "--input", "pair.json"]);
    let printed = String::from_utf8(out.stdout).unwrap().trim().to_string();
    let expected = specflow::cli::format_sig12(distance_d(&s, &t).unwrap().cost);
    assert_eq!(printed, expected);
}

#[test]
fn track_loop_gives_straight_lines_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = specflow(
        dir.path(),
        &[
            "--out",
            "art",
            "--svg",
            "track",
            "--builtin",
            "loop",
            "--n",
            "2",
        ],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("art/track.csv")).unwrap();
    let track = specflow::cli::track_from_csv(&csv).unwrap();
    assert_eq!(track.track_count(), 2);
    for (k, &r) in track.grid().iter().enumerate() {
        for j in 0..2 {
            assert!((track.theta(j, k) - std::f64::consts::TAU * r).abs() < 1e-9);
        }
    }
    // Round trip is exact.
    let again = specflow::cli::track_to_csv(&track);
    assert_eq!(csv, again);
    assert!(dir.path().join("art/track.svg").exists());

    // Identity path: header only.
    let out = specflow(
        dir.path(),
        &["--out", "id", "track", "--builtin", "identity"],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("id/track.csv")).unwrap();
    assert_eq!(csv.trim(), "r,j,theta_j");
}

#[test]
fn track_exp_matches_direct_eigendecomposition() {
    let dir = tempfile::tempdir().unwrap();
    // Diagonal generator: phases r and -r/2 along the path.
    write(
        dir.path(),
        "h.json",
        r#"[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]]"#,
    );
    let out = specflow(
        dir.path(),
        &[
            "--out",
            "art",
            "track",
            "--builtin",
            "exp",
            "--matrix",
            "h.json",
            "--r-max",
            "2.0",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("art/track.csv")).unwrap();
    let track = specflow::cli::track_from_csv(&csv).unwrap();
    assert_eq!(track.track_count(), 2);
    let mut slopes: Vec<f64> = (0..2)
        .map(|j| track.theta(j, track.node_count() - 1) / 2.0)
        .collect();
    slopes.sort_by(|a, b| a.total_cmp(b));
    assert!((slopes[0] - (-0.5)).abs() < 1e-9);
    assert!((slopes[1] - 1.0).abs() < 1e-9);
    // Phases follow the generator's eigenvalues at every node.
    for (k, &r) in track.grid().iter().enumerate() {
        let mut at_node = [track.theta(0, k), track.theta(1, k)];
        at_node.sort_by(|a, b| a.total_cmp(b));
        assert!((at_node[0] - (-0.5 * r)).abs() < 1e-9, "node {k}");
        assert!((at_node[1] - r).abs() < 1e-9, "node {k}");
    }
}

#[test]
fn track_from_sampled_matrices_file() {
    let dir = tempfile::tempdir().unwrap();
    // Sampled diag(e^{i r}) at a fine grid.
    let nodes: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    let mats: Vec<String> = nodes
        .iter()
        .map(|r| format!("[[[{}, {}]]]", r.cos(), r.sin()))
        .collect();
    let doc = format!(
        r#"{{"r": [{}], "matrices": [{}]}}"#,
        nodes
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(","),
        mats.join(",")
    );
    write(dir.path(), "ms.json", &doc);
    let out = specflow(
        dir.path(),
        &["--out", "art", "track", "--matrices", "ms.json"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("art/track.csv")).unwrap();
    let track = specflow::cli::track_from_csv(&csv).unwrap();
    assert_eq!(track.track_count(), 1);
    let last = track.theta(0, track.node_count() - 1);
    assert!((last - 1.0).abs() < 1e-9, "endpoint {last}");
}

#[test]
fn mu_loop_reports_winding_and_plot_renders() {
    let dir = tempfile::tempdir().unwrap();
    let out = specflow(
        dir.path(),
        &["--out", "art", "mu", "--builtin", "loop", "--n", "3"],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("loop winding = 3"), "stdout: {stdout}");
    let pieces = specflow::cli::mu_pieces_from_csv(
        &fs::read_to_string(dir.path().join("art/mu.csv")).unwrap(),
    )
    .unwrap();
    assert_eq!(pieces.len(), 1);
    assert_eq!(pieces[0].2, 3.0);

    let out = specflow(
        dir.path(),
        &[
            "plot",
            "--input",
            "art/mu.csv",
            "--kind",
            "mu",
            "--output",
            "art/mu.svg",
        ],
    );
    assert!(out.status.success());
    let svg = fs::read_to_string(dir.path().join("art/mu.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn tracking_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Two samples that jump too far for the step bound: tracking must
    // refuse rather than guess the winding.
    write(
        dir.path(),
        "jump.json",
        r#"{"r": [0.0, 1.0],
            "matrices": [[[[1.0, 0.0]]], [[[-1.0, 0.0]]]]}"#,
    );
    let out = specflow(dir.path(), &["track", "--matrices", "jump.json"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pi/2"), "stderr: {err}");
}

#[test]
fn scatter_sweep_zero_coupling_and_failure_modes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.json",
        r#"{"model": {"sites": [0], "kappa": [1.0], "J": [[1.0]]},
            "lambda_grid": [0.5], "r_grid": [0.0]}"#,
    );
    let out = specflow(
        dir.path(),
        &["--out", "art", "scatter", "--config", "cfg.json"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("art/scatter.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    for field in row.split(',').skip(2).take(4) {
        assert_eq!(field.parse::<f64>().unwrap().abs(), 0.0, "row: {row}");
    }

    // Unknown keys are rejected.
    write(
        dir.path(),
        "bad.json",
        r#"{"model": {"sites": [0], "kappa": [1.0], "J": [[1.0]]},
            "lambda_grid": [0.5], "r_grid": [0.0], "surprise": 1}"#,
    );
    let out = specflow(dir.path(), &["scatter", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));

    // A sweep across a resonance flags the row and exits 4 with the
    // bracketed location (rank-one above the band resonates at sqrt 5).
    write(
        dir.path(),
        "res.json",
        r#"{"model": {"sites": [0], "kappa": [1.0], "J": [[1.0]]},
            "lambda_grid": [3.0], "r_grid": [3.0]}"#,
    );
    let out = specflow(
        dir.path(),
        &["--out", "res", "scatter", "--config", "res.json"],
    );
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2.236"), "stderr: {err}");
    let csv = fs::read_to_string(dir.path().join("res/scatter.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains("nan"));
}

#[test]
fn scatter_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "cfg.json",
        r#"{"model": {"sites": [0, 1], "kappa": [1.0, 0.8],
                      "J": [[0.6, 0.25], [0.25, -0.4]]},
            "lambda_grid": [0.5, -1.0], "r_grid": [0.4, 0.9, 1.4]}"#,
    );
    let out1 = specflow(
        dir.path(),
        &["--out", "a", "scatter", "--config", "cfg.json"],
    );
    let out2 = specflow(
        dir.path(),
        &["--out", "b", "scatter", "--config", "cfg.json"],
    );
    assert!(out1.status.success() && out2.status.success());
    let a = fs::read_to_string(dir.path().join("a/scatter.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("b/scatter.csv")).unwrap();
    assert_eq!(a, b);
    let summary = |bytes: &[u8]| {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(summary(&out1.stdout), summary(&out2.stdout));
}

#[test]
fn verify_passes_and_detects_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let out = specflow(dir.path(), &["verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(!table.contains("[FAIL]"));

    let out2 = specflow(dir.path(), &["verify"]);
    assert_eq!(table, String::from_utf8(out2.stdout).unwrap());

    let out = specflow(dir.path(), &["verify", "--inject-fault", "metric"]);
    assert_eq!(out.status.code(), Some(1));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("[FAIL] metric_matches_brute_force"));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("metric_matches_brute_force"));
}
