//! Black-box behavior of the `jfrt` binary: artifacts land where asked,
//! reruns are byte-identical, and failures map to the documented exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn jfrt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jfrt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|_| panic!("missing {name}"))
}

fn synth_smooth(dir: &Path, prefix: &str, seed: &str) {
    let out = jfrt(
        &["synth", "--kind", "smooth", "--n", "10", "--t", "16", "--seed", seed,
          "--out-prefix", prefix],
        dir,
    );
    assert_success(&out);
}

#[test]
fn synth_writes_expected_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), "a", "5");
    synth_smooth(dir.path(), "b", "5");
    assert_eq!(read(dir.path(), "a_coords.csv"), read(dir.path(), "b_coords.csv"));
    assert_eq!(read(dir.path(), "a_signal.csv"), read(dir.path(), "b_signal.csv"));

    let out = jfrt(
        &["synth", "--kind", "motion3", "--n", "8", "--t", "24", "--seed", "2",
          "--out-prefix", "m"],
        dir.path(),
    );
    assert_success(&out);
    for name in ["m_coords.csv", "m_dim0.csv", "m_dim1.csv", "m_dim2.csv", "m_labels.csv"] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }
}

#[test]
fn transform_round_trips_through_the_inverse_flag() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), "s", "7");
    let fwd = jfrt(
        &["transform", "--signal", "s_signal.csv", "--graph", "knn:s_coords.csv:3",
          "--alpha", "0.905", "--beta", "1.2", "--out", "hat.csv"],
        dir.path(),
    );
    assert_success(&fwd);
    let back = jfrt(
        &["transform", "--signal", "hat.csv", "--graph", "knn:s_coords.csv:3",
          "--alpha", "0.905", "--beta", "1.2", "--inverse", "--out", "back.csv"],
        dir.path(),
    );
    assert_success(&back);

    let original = jfrt::io::load_signal_csv(&dir.path().join("s_signal.csv")).unwrap();
    let recovered = jfrt::io::load_signal_csv(&dir.path().join("back.csv")).unwrap();
    let diff: f64 = original
        .values
        .iter()
        .zip(recovered.values.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(diff / original.fro_norm() <= 1e-8, "round trip error {diff}");
}

#[test]
fn transform_accepts_negative_orders_and_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), "s", "9");
    std::fs::write(
        dir.path().join("edges.csv"),
        "src,dst,weight\n0,1,1\n1,2,1\n2,3,1\n3,4,1\n4,5,1\n5,6,1\n6,7,1\n7,8,1\n8,9,1\n9,0,1\n",
    )
    .unwrap();
    let out = jfrt(
        &["transform", "--signal", "s_signal.csv", "--graph", "edges.csv",
          "--alpha", "-1", "--beta", "-0.5", "--out", "neg.csv"],
        dir.path(),
    );
    assert_success(&out);
}

#[test]
fn denoise_sweep_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), "s", "11");
    let args = [
        "denoise-sweep", "--signal", "s_signal.csv", "--coords", "s_coords.csv",
        "--knn", "3", "--alpha-grid", "0.9:1.1:0.1", "--beta-grid", "1",
        "--tau-g-grid", "0,0.4", "--tau-t-grid", "0,0.4",
        "--snr-db", "0", "--seed", "13", "--out", "sweep.csv",
    ];
    assert_success(&jfrt(&args, dir.path()));
    let csv_a = read(dir.path(), "sweep.csv");
    let json_a = read(dir.path(), "sweep.json");
    assert_success(&jfrt(&args, dir.path()));
    assert_eq!(csv_a, read(dir.path(), "sweep.csv"));
    assert_eq!(json_a, read(dir.path(), "sweep.json"));
    assert!(String::from_utf8(csv_a).unwrap().starts_with("alpha,beta,tau_g,tau_t,mse_percent\n"));
}

#[test]
fn cluster_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = jfrt(
        &["synth", "--kind", "motion3", "--n", "10", "--t", "48", "--seed", "3",
          "--out-prefix", "m"],
        dir.path(),
    );
    assert_success(&out);
    let args = [
        "cluster", "--signals", "m_dim0.csv", "m_dim1.csv", "m_dim2.csv",
        "--coords", "m_coords.csv", "--knn", "3", "--labels", "m_labels.csv",
        "--window", "12", "--overlap", "0.5", "--k", "3",
        "--alpha-grid", "0,1", "--beta-grid", "1", "--repeats", "2",
        "--seed", "17", "--snr-db", "-10", "--sparse-density", "0.1",
        "--out", "clus.csv",
    ];
    assert_success(&jfrt(&args, dir.path()));
    let first = read(dir.path(), "clus.csv");
    assert_success(&jfrt(&args, dir.path()));
    assert_eq!(first, read(dir.path(), "clus.csv"));
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("alpha,beta,repeat,accuracy\n"));
    // 2 orders x 2 repeats plus the header.
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn missing_input_and_bad_parameters_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    synth_smooth(dir.path(), "s", "19");

    let missing = jfrt(
        &["transform", "--signal", "nope.csv", "--graph", "knn:s_coords.csv:3",
          "--alpha", "1", "--beta", "1", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(missing.status.code(), Some(2));

    let bad_grid = jfrt(
        &["denoise-sweep", "--signal", "s_signal.csv", "--coords", "s_coords.csv",
          "--knn", "3", "--alpha-grid", "1:0:0.1", "--beta-grid", "1",
          "--tau-g-grid", "0", "--tau-t-grid", "0", "--snr-db", "0",
          "--seed", "1", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(bad_grid.status.code(), Some(2));

    let usage = jfrt(&["transform", "--signal", "s_signal.csv"], dir.path());
    assert_eq!(usage.status.code(), Some(2));

    let labels: String = "0\n".repeat(16);
    std::fs::write(dir.path().join("labels.csv"), labels).unwrap();
    let oversized_window = jfrt(
        &["cluster", "--signals", "s_signal.csv", "--coords", "s_coords.csv",
          "--knn", "3", "--labels", "labels.csv", "--window", "99",
          "--overlap", "0.5", "--k", "2", "--alpha-grid", "1", "--beta-grid", "1",
          "--repeats", "1", "--seed", "1", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(oversized_window.status.code(), Some(2));
}
