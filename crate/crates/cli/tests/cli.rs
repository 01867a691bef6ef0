use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use clap::Parser;
use proptest::prelude::*;
use serde_json::{json, Value};

use qdwh_cli::matfile::{decode, encode, read_matrix, read_spectrum, sidecar_path, write_matrix};
use qdwh_cli::{execute, Cli, CliError, EXIT_EMPTY};
use qdwh_core::DenseMatrix;

fn run(args: &[&str]) -> (u8, Vec<u8>) {
    let cli = Cli::try_parse_from(std::iter::once("qdwh").chain(args.iter().copied()))
        .expect("valid flags");
    let mut out = Vec::new();
    let code = execute(&cli, &mut out).expect("command succeeds");
    (code, out)
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// Replaces every leaf by its JSON type so the golden pins field names and
/// types, not values.
fn shape(v: &Value) -> Value {
    match v {
        Value::Null => json!("null"),
        Value::Bool(_) => json!("bool"),
        Value::Number(_) => json!("number"),
        Value::String(_) => json!("string"),
        Value::Array(a) => Value::Array(a.first().map(shape).into_iter().collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), shape(v))).collect()),
    }
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("QDWH_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, want, "golden {name} differs");
}

fn gen(dir: &Path, kind: &str, n: usize, extra: &[&str]) -> PathBuf {
    let out = dir.join(format!("{kind}{n}.qdwh"));
    let n = n.to_string();
    let o = path_str(&out);
    let mut args = vec!["gen", "--kind", kind, "--n", &n, "--out", &o];
    args.extend_from_slice(extra);
    assert_eq!(run(&args).0, 0);
    out
}

#[test]
fn gen_eig_plants_negative_entries() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "eig", 256, &["--k", "26", "--seed", "1"]);
    let m = read_matrix(&a).unwrap();
    assert_eq!((m.rows(), m.cols()), (256, 256));
    assert_eq!(fs::metadata(&a).unwrap().len(), 21 + 8 * 256 * 256);
    let d = read_spectrum(&sidecar_path(&a)).unwrap();
    assert_eq!(d.len(), 256);
    assert_eq!(d.iter().filter(|&&x| x < 0.0).count(), 26);
}

#[test]
fn gen_svd_sidecar_and_repeatability() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "svd", 100, &["--seed", "2"]);
    let sigma = read_spectrum(&sidecar_path(&g)).unwrap();
    assert_eq!(sigma[0], 0.5);
    assert_eq!(sigma[99], 0.5f64.powi(100));
    let first = (fs::read(&g).unwrap(), fs::read(sidecar_path(&g)).unwrap());
    let g2 = gen(dir.path(), "svd", 100, &["--seed", "2"]);
    assert_eq!(g, g2);
    assert_eq!(
        first,
        (fs::read(&g).unwrap(), fs::read(sidecar_path(&g)).unwrap())
    );
}

#[test]
fn solve_partial_eig_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "eig", 256, &["--k", "26", "--seed", "1"]);
    let (code, out) = run(&[
        "solve",
        "partial-eig",
        "--in",
        &path_str(&a),
        "--iters",
        "3",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["k"], 26);
    assert_eq!(v["spectrum"].as_array().unwrap().len(), 26);
    let acc = &v["accuracy"];
    for key in ["orth_left", "orth_right", "value_err"] {
        assert!(acc[key].as_f64().unwrap() <= 1e-12, "{key} = {}", acc[key]);
    }
    // Residuals are absolute; ‖A‖₂ is about 60 here.
    let norm = v["spectrum"][0].as_f64().unwrap().abs().max(1.0);
    for key in ["resid_left", "resid_right"] {
        assert!(acc[key].as_f64().unwrap() <= 1e-12 * norm);
    }
    assert!(v.get("wall_seconds").is_none());
    check_golden(
        "solve_report_shape.json",
        &(serde_json::to_string_pretty(&shape(&v)).unwrap() + "\n"),
    );
}

#[test]
fn solve_partial_svd_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "svd", 200, &["--seed", "3"]);
    let (code, out) = run(&["solve", "partial-svd", "--in", &path_str(&g), "--s", "0.1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    // About 3% of n.
    let k = v["k"].as_u64().unwrap();
    assert!((5..=8).contains(&k), "k = {k}");
    assert!(v["accuracy"]["value_err"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["flops"]["kind"], "partial-svd");
}

#[test]
fn solve_csv_format_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "eig", 40, &["--k", "4"]);
    let (_, out) = run(&[
        "--format",
        "csv",
        "solve",
        "partial-eig",
        "--in",
        &path_str(&a),
    ]);
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("index,value\n1,-"));
    assert_eq!(text.lines().count(), 5);
    let (_, out) = run(&["solve", "full-eig", "--in", &path_str(&a), "--timing"]);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert!(v["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["k"], 40);
}

#[test]
fn spd_input_exits_with_empty_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("spd.qdwh");
    write_matrix(&p, &DenseMatrix::from_diag(&[1.0, 2.0, 3.0, 4.0])).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qdwh"))
        .args(["solve", "partial-eig", "--in", &path_str(&p)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(i32::from(EXIT_EMPTY)));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "empty-spectrum");
    assert_eq!(v["k"], 0);
    check_golden(
        "solve_empty_shape.json",
        &(serde_json::to_string_pretty(&shape(&v)).unwrap() + "\n"),
    );
}

#[test]
fn errors_exit_with_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_qdwh"))
        .args(["solve", "partial-eig", "--in", "/nonexistent/a.qdwh"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bench_partial_svd_sweep() {
    let (code, out) = run(&["bench", "--n", "64,128,256", "--solvers", "partial-svd"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    check_golden("bench_header.csv", &format!("{}\n", lines.next().unwrap()));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert_eq!(r[0], "partial-svd");
        assert!(r[4].parse::<f64>().unwrap() <= 1e-12, "value_err {}", r[4]);
        assert_eq!(r[8], "");
    }
}

#[test]
fn bench_partial_rows_cost_less_than_full() {
    let (_, out) = run(&[
        "bench",
        "--n",
        "96",
        "--s",
        "0.01",
        "--solvers",
        "partial-svd,partial-eig,full-eig,full-svd",
    ]);
    let text = String::from_utf8(out).unwrap();
    let flops = |solver: &str| -> f64 {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{solver},")))
            .unwrap();
        line.split(',').nth(7).unwrap().parse().unwrap()
    };
    assert!(flops("partial-eig") < flops("full-eig"));
    assert!(flops("partial-svd") < flops("full-svd"));
}

#[test]
fn empty_bench_is_header_only() {
    for args in [&["bench"][..], &["bench", "--n"][..]] {
        let (code, out) = run(args);
        assert_eq!(code, 0);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            fs::read_to_string(golden("bench_header.csv")).unwrap()
        );
    }
}

#[test]
fn verify_reports_counts() {
    let (code, out) = run(&["verify"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("pert_bound: 100/100 pass"), "{text}");
    assert!(text.contains("weights: 2/2 pass"));
    let (code, out) = run(&[
        "--format",
        "json",
        "verify",
        "--property",
        "flatten",
        "--s",
        "0.2",
        "--iters",
        "3",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v[0]["property"], "flatten");
    assert!(v[0]["worst"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verify_fails_on_an_unflattened_plan() {
    let (code, out) = run(&[
        "verify",
        "--property",
        "flatten",
        "--s",
        "0.2",
        "--iters",
        "1",
    ]);
    assert_eq!(code, 1);
    assert!(String::from_utf8(out).unwrap().contains("0/1 FAIL"));
}

#[test]
fn rejects_bad_flags() {
    assert!(Cli::try_parse_from(["qdwh", "solve", "partial-eig", "--in", "a", "--bogus"]).is_err());
    assert!(
        Cli::try_parse_from(["qdwh", "gen", "--kind", "tri", "--n", "3", "--out", "a"]).is_err()
    );
    let cli = Cli::try_parse_from(["qdwh", "--threads", "0", "verify"]).unwrap();
    assert!(matches!(
        execute(&cli, &mut Vec::new()),
        Err(CliError::Usage(_))
    ));
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "eig", 20, &["--k", "2"]);
    let cli = Cli::try_parse_from([
        "qdwh",
        "solve",
        "partial-eig",
        "--in",
        &path_str(&a),
        "--s",
        "0.1",
    ])
    .unwrap();
    assert!(matches!(
        execute(&cli, &mut Vec::new()),
        Err(CliError::Usage(_))
    ));
}

#[test]
fn threads_env_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_qdwh"))
        .args(["verify", "--property", "weights"])
        .env("QDWH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_file_round_trip_is_bitwise(rows in 1usize..12, cols in 1usize..12, seed in any::<u64>()) {
        let mut state = seed;
        let a = DenseMatrix::from_fn(rows, cols, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            f64::from_bits(state >> 2).clamp(-1e300, 1e300)
        });
        let b = decode(&encode(&a)).unwrap();
        prop_assert_eq!(a.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                        b.data().iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        prop_assert_eq!((b.rows(), b.cols()), (rows, cols));
    }
}
