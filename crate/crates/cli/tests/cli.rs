//! End-to-end tests of the `spmvl` binary: output schemas, artifact files,
//! determinism, environment resolution and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spmvl"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spmvl-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Two dense 3x3 diagonal blocks plus a column shared by all six rows.
fn write_fixture(dir: &Path) -> PathBuf {
    let mut body = String::from("%%MatrixMarket matrix coordinate real general\n6 7 24\n");
    for b in 0..2 {
        for i in 0..3 {
            for j in 0..3 {
                body.push_str(&format!("{} {} 1.0\n", 3 * b + i + 1, 3 * b + j + 1));
            }
        }
    }
    for i in 0..6 {
        body.push_str(&format!("{} 7 2.0\n", i + 1));
    }
    let path = dir.join("twoblock.mtx");
    std::fs::write(&path, body).unwrap();
    path
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn stats_schema_and_values() {
    let dir = workdir("stats");
    let mtx = write_fixture(&dir);
    let out = run_ok(bin().args(["stats", mtx.to_str().unwrap()]));
    let r = rows(&out);
    assert_eq!(
        r[0],
        ["matrix", "n_rows", "n_cols", "nnz", "row_avg", "row_max", "row_cov", "col_avg", "col_max", "col_cov"]
    );
    assert_eq!(&r[1][..4], ["twoblock", "6", "7", "24"]);
    assert_eq!(r[1][4], "4.00"); // 24 nnz over 6 rows
    assert_eq!(r[1][5], "4");
    assert_eq!(r[1][8], "6"); // shared column holds 6 nonzeros
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stats_tsv_uses_tabs() {
    let dir = workdir("tsv");
    let mtx = write_fixture(&dir);
    let out = run_ok(bin().args(["stats", mtx.to_str().unwrap(), "--out", "tsv"]));
    assert!(out.lines().next().unwrap().contains('\t'));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reorder_writes_artifacts_deterministically() {
    let dir = workdir("reorder");
    let mtx = write_fixture(&dir);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out_dir = dir.join(format!("run{run}"));
        let stdout = run_ok(bin().args([
            "reorder",
            mtx.to_str().unwrap(),
            "--method",
            "shp_cn",
            "--cache-bytes",
            "320",
            "--seeds",
            "2",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]));
        let r = rows(&stdout);
        assert_eq!(r[0], ["matrix", "method", "seed", "k", "bound", "cutsize", "oversized"]);
        assert_eq!(r.len(), 4); // header + 2 seeds + avg row
        assert_eq!(r[3][2], "avg");
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            [
                "twoblock.shp_cn.s0.colperm",
                "twoblock.shp_cn.s0.rowperm",
                "twoblock.shp_cn.s1.colperm",
                "twoblock.shp_cn.s1.rowperm",
                "twoblock.shp_cn.stats.csv",
            ]
        );
        outputs.push((stdout, files));
    }
    assert_eq!(outputs[0], outputs[1], "artifacts must be byte-identical across reruns");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn reorder_splitting_method_writes_split_file() {
    let dir = workdir("split");
    let mtx = write_fixture(&dir);
    run_ok(bin().args([
        "reorder",
        mtx.to_str().unwrap(),
        "--method",
        "mhp_rcn",
        "--cache-bytes",
        "300",
        "--out-dir",
        dir.to_str().unwrap(),
    ]));
    let split = dir.join("twoblock.mhp_rcn.s0.split");
    let text = std::fs::read_to_string(&split).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.ends_with(" 24"), "header line `{first}` must declare the nonzero count");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn simulate_reports_bound_that_holds() {
    let dir = workdir("sim");
    let mtx = write_fixture(&dir);
    let out = run_ok(bin().args([
        "simulate",
        mtx.to_str().unwrap(),
        "--method",
        "shp_cn",
        "--cache-bytes",
        "320",
    ]));
    let r = rows(&out);
    assert_eq!(r[0], ["matrix", "method", "cache_bytes", "line_bytes", "phi_x", "phi_y", "bound", "holds"]);
    assert_eq!(&r[1][..4], ["twoblock", "shp_cn", "320", "8"]);
    let phi_x: u64 = r[1][4].parse().unwrap();
    let bound: u64 = r[1][6].parse().unwrap();
    assert!(phi_x <= bound);
    assert_eq!(r[1][7], "true");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn simulate_accepts_artifact_files() {
    let dir = workdir("simfiles");
    let mtx = write_fixture(&dir);
    run_ok(bin().args([
        "reorder",
        mtx.to_str().unwrap(),
        "--method",
        "shp_cn",
        "--cache-bytes",
        "320",
        "--out-dir",
        dir.to_str().unwrap(),
    ]));
    let out = run_ok(bin().args([
        "simulate",
        mtx.to_str().unwrap(),
        "--row-perm",
        dir.join("twoblock.shp_cn.s0.rowperm").to_str().unwrap(),
        "--col-perm",
        dir.join("twoblock.shp_cn.s0.colperm").to_str().unwrap(),
        "--cache-bytes",
        "320",
    ]));
    let r = rows(&out);
    assert_eq!(r[1][1], "file");
    assert_eq!(r[1][6], ""); // no bound for raw artifact files
    // a permutation-based simulation of the same reordering counts the same
    // x misses as the method run
    let direct = run_ok(bin().args([
        "simulate", mtx.to_str().unwrap(), "--method", "shp_cn", "--cache-bytes", "320",
    ]));
    assert_eq!(rows(&direct)[1][4], r[1][4]);

    run_ok(bin().args([
        "reorder", mtx.to_str().unwrap(), "--method", "mhp_rcn", "--cache-bytes", "300",
        "--out-dir", dir.to_str().unwrap(),
    ]));
    let out = run_ok(bin().args([
        "simulate",
        mtx.to_str().unwrap(),
        "--splitting",
        dir.join("twoblock.mhp_rcn.s0.split").to_str().unwrap(),
        "--cache-bytes",
        "304",
    ]));
    assert_eq!(rows(&out)[1][1], "file");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bench_then_report_round_trip() {
    let dir = workdir("bench");
    let mtx = write_fixture(&dir);
    let mut bench_csv = String::new();
    for method in ["identity", "shp_cn", "mhp_rcn"] {
        let out = run_ok(bin().args([
            "bench",
            mtx.to_str().unwrap(),
            "--method",
            method,
            "--cache-bytes",
            "320",
            "--reps",
            "5",
            "--warmup",
            "1",
        ]));
        let r = rows(&out);
        assert_eq!(
            r[0],
            ["matrix", "method", "seed", "k", "reps", "warmup", "min_ns", "median_ns", "normalized", "reorder_ms", "amortization", "checksum"]
        );
        assert_eq!(r[1][1], method);
        let _: f64 = r[1][8].parse().expect("normalized must be numeric");
        let _: u64 = r[1][7].parse().expect("median_ns must be numeric");
        if bench_csv.is_empty() {
            bench_csv = out;
        } else {
            bench_csv.push_str(out.split_once('\n').unwrap().1);
        }
    }
    let csv = dir.join("bench.csv");
    std::fs::write(&csv, &bench_csv).unwrap();
    let report = run_ok(bin().args(["report", csv.to_str().unwrap()]));
    let r = rows(&report);
    assert_eq!(r[0], ["method", "n", "median_ns_gm", "normalized_gm", "amortization_gm"]);
    let methods: Vec<&str> = r[1..].iter().map(|f| f[0].as_str()).collect();
    assert_eq!(methods, ["identity", "mhp_rcn", "shp_cn"]);
    assert!(r.iter().skip(1).all(|f| f[1] == "1"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn corpus_env_resolves_relative_paths() {
    let dir = workdir("corpus");
    write_fixture(&dir);
    let out = bin()
        .args(["stats", "twoblock.mtx"])
        .env("SPMVL_CORPUS", &dir)
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("twoblock,6,7,24"));
    let _ = std::fs::remove_dir_all(&dir);
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = workdir("exit");
    let mtx = write_fixture(&dir);

    // usage errors -> 1
    let unknown_method = bin()
        .args(["reorder", mtx.to_str().unwrap(), "--method", "nope"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&unknown_method), 1);
    let bad_flag = bin().args(["stats", "--no-such-flag"]).output().unwrap();
    assert_eq!(exit_code(&bad_flag), 1);

    // data errors -> 2
    let missing = bin().args(["stats", dir.join("absent.mtx").to_str().unwrap()]).output().unwrap();
    assert_eq!(exit_code(&missing), 2);
    let garbage = dir.join("garbage.mtx");
    std::fs::write(&garbage, "not a matrix\n").unwrap();
    let malformed = bin().args(["stats", garbage.to_str().unwrap()]).output().unwrap();
    assert_eq!(exit_code(&malformed), 2);

    // help and version -> 0
    assert_eq!(exit_code(&bin().arg("--help").output().unwrap()), 0);
    assert_eq!(exit_code(&bin().arg("--version").output().unwrap()), 0);
    let _ = std::fs::remove_dir_all(&dir);
}
