//! `spmvl` - reorder sparse matrices for cache locality, then simulate or
//! benchmark the resulting SpMxV kernels.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! malformed inputs), 3 internal failure.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spmv_locality::cachesim::{check_bounds, simulate, trace_csr, trace_multi, CacheConfig};
use spmv_locality::kernels::{spmv_csr, spmv_multi, MultiMatrix};
use spmv_locality::matrix::{
    apply_permutations, matrix_stats, read_matrix_market, CsrMatrix, IcsrMatrix, Permutation,
    Splitting, TripletMatrix,
};
use spmv_locality::partition::PartitionerConfig;
use spmv_locality::reorder::{reorder, MethodKind};

/// Directory searched for matrices given by relative paths.
const CORPUS_ENV: &str = "SPMVL_CORPUS";

#[derive(Parser)]
#[command(name = "spmvl", version, about = "Cache-locality reordering for sparse matrix-vector multiplication")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Tsv,
}

impl OutFormat {
    fn sep(self) -> char {
        match self {
            OutFormat::Csv => ',',
            OutFormat::Tsv => '\t',
        }
    }
}

#[derive(Args)]
struct PartitionFlags {
    /// Target cache capacity for the fit test, in bytes.
    #[arg(long, default_value_t = 2 * 1024 * 1024)]
    cache_bytes: u64,
    /// Allowed bisection imbalance.
    #[arg(long, default_value_t = 0.10)]
    eps: f64,
    /// Number of seeded instances to run (seeds 0..N).
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Bipartitioning restarts per bisection.
    #[arg(long, default_value_t = 10)]
    runs: usize,
}

impl PartitionFlags {
    fn config(&self, seed: u64) -> PartitionerConfig {
        PartitionerConfig {
            cache_bytes: self.cache_bytes,
            imbalance_eps: self.eps,
            seed,
            n_runs: self.runs,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a reordering method and write permutation/splitting files.
    Reorder {
        matrix: PathBuf,
        #[arg(long)]
        method: String,
        #[command(flatten)]
        part: PartitionFlags,
        /// Directory for the produced artifact files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Time repeated SpMxV in original and reordered form.
    Bench {
        matrix: PathBuf,
        #[arg(long, default_value = "identity")]
        method: String,
        #[command(flatten)]
        part: PartitionFlags,
        /// Timed kernel calls per measurement.
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Untimed kernel calls before measuring.
        #[arg(long, default_value_t = 3)]
        warmup: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Count cache misses of the reordered kernel and check the miss bound.
    Simulate {
        matrix: PathBuf,
        /// Method to run; omit when passing artifact files instead.
        #[arg(long)]
        method: Option<String>,
        /// Existing row permutation file (with --col-perm).
        #[arg(long, requires = "col_perm")]
        row_perm: Option<PathBuf>,
        #[arg(long, requires = "row_perm")]
        col_perm: Option<PathBuf>,
        /// Existing splitting file.
        #[arg(long, conflicts_with_all = ["row_perm", "col_perm"])]
        splitting: Option<PathBuf>,
        #[command(flatten)]
        part: PartitionFlags,
        /// Cache line size of the simulated cache; 8 makes the miss counts
        /// entry-granular, which is what the bounds are stated in.
        #[arg(long, default_value_t = 8)]
        line_bytes: u64,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Print size and row/column statistics of a matrix.
    Stats {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Aggregate bench CSV files into per-method geometric means.
    Report {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli.cmd) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<spmv_locality::Error>() {
        Some(spmv_locality::Error::InvalidConfig(_)) => 1,
        Some(spmv_locality::Error::InfeasibleSplit(_)) => 3,
        Some(_) => 2,
        None => 3,
    }
}

fn run(cmd: Cmd) -> anyhow::Result<()> {
    match cmd {
        Cmd::Reorder { matrix, method, part, out_dir, out } => cmd_reorder(&matrix, &method, &part, &out_dir, out),
        Cmd::Bench { matrix, method, part, reps, warmup, out } => cmd_bench(&matrix, &method, &part, reps, warmup, out),
        Cmd::Simulate { matrix, method, row_perm, col_perm, splitting, part, line_bytes, out } => {
            cmd_simulate(&matrix, method.as_deref(), row_perm.as_deref(), col_perm.as_deref(), splitting.as_deref(), &part, line_bytes, out)
        }
        Cmd::Stats { matrix, out } => cmd_stats(&matrix, out),
        Cmd::Report { files, out } => cmd_report(&files, out),
    }
}

/// Resolves a matrix path, falling back to the corpus directory from the
/// environment for relative paths.
fn load_matrix(path: &Path) -> anyhow::Result<(TripletMatrix, String)> {
    let resolved = if path.exists() {
        path.to_path_buf()
    } else if path.is_relative() {
        match std::env::var_os(CORPUS_ENV) {
            Some(dir) => Path::new(&dir).join(path),
            None => path.to_path_buf(),
        }
    } else {
        path.to_path_buf()
    };
    let m = read_matrix_market(&resolved)
        .with_context(|| format!("reading matrix `{}`", resolved.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok((m, name))
}

fn emit(sep: char, fields: &[String]) {
    println!("{}", fields.join(&sep.to_string()));
}

fn cmd_reorder(
    matrix: &Path,
    method: &str,
    part: &PartitionFlags,
    out_dir: &Path,
    out: OutFormat,
) -> anyhow::Result<()> {
    let (m, name) = load_matrix(matrix)?;
    let kind = MethodKind::parse(method)?;
    std::fs::create_dir_all(out_dir)?;
    let sep = out.sep();
    let header = ["matrix", "method", "seed", "k", "bound", "cutsize", "oversized"].map(String::from);
    emit(sep, &header);
    let mut stats_rows = vec![header.join(&sep.to_string())];
    let (mut bound_sum, mut cut_sum, mut k_sum) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..part.seeds {
        let r = reorder(&m, kind, &part.config(seed))?;
        let stem = format!("{name}.{}.s{seed}", kind.name());
        if let Some(bf) = &r.block_form {
            bf.row_perm.write_file(&out_dir.join(format!("{stem}.rowperm")))?;
            bf.col_perm.write_file(&out_dir.join(format!("{stem}.colperm")))?;
        }
        if let Some(s) = &r.splitting {
            s.write_file(&out_dir.join(format!("{stem}.split")))?;
        }
        let row = [
            name.clone(),
            kind.name().into(),
            seed.to_string(),
            r.k.to_string(),
            r.bound_value.to_string(),
            r.cutsize.to_string(),
            r.oversized.to_string(),
        ];
        emit(sep, &row);
        stats_rows.push(row.join(&sep.to_string()));
        bound_sum += r.bound_value as f64;
        cut_sum += r.cutsize as f64;
        k_sum += r.k as f64;
    }
    if part.seeds > 1 {
        let n = part.seeds as f64;
        let avg = [
            name.clone(),
            kind.name().into(),
            "avg".into(),
            format!("{:.2}", k_sum / n),
            format!("{:.2}", bound_sum / n),
            format!("{:.2}", cut_sum / n),
            String::new(),
        ];
        emit(sep, &avg);
        stats_rows.push(avg.join(&sep.to_string()));
    }
    let sidecar = out_dir.join(format!("{name}.{}.stats.csv", kind.name()));
    std::fs::write(&sidecar, stats_rows.join("\n") + "\n")?;
    Ok(())
}

/// Deterministic input vector so runs are comparable.
fn input_vector(n: usize) -> Vec<f64> {
    (0..n).map(|j| 1.0 + (j.wrapping_mul(2654435761) % 1000) as f64 / 1000.0).collect()
}

fn time_calls(mut call: impl FnMut() -> f64, warmup: usize, reps: usize) -> (Duration, Duration, f64) {
    let mut sink = 0.0;
    for _ in 0..warmup {
        sink += call();
    }
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t0 = Instant::now();
        sink += call();
        samples.push(t0.elapsed());
    }
    samples.sort_unstable();
    let min = samples[0];
    let median = samples[samples.len() / 2];
    (min, median, sink)
}

fn cmd_bench(
    matrix: &Path,
    method: &str,
    part: &PartitionFlags,
    reps: usize,
    warmup: usize,
    out: OutFormat,
) -> anyhow::Result<()> {
    if reps == 0 {
        bail!(spmv_locality::Error::InvalidConfig("--reps must be at least 1".into()));
    }
    let (m, name) = load_matrix(matrix)?;
    let kind = MethodKind::parse(method)?;
    let x = input_vector(m.n_cols);
    let csr = CsrMatrix::from_triplet(&m);
    let (_, base_median, _) = time_calls(|| spmv_csr(&csr, &x).unwrap().iter().sum(), warmup, reps);

    let sep = out.sep();
    emit(sep, &["matrix", "method", "seed", "k", "reps", "warmup", "min_ns", "median_ns", "normalized", "reorder_ms", "amortization", "checksum"].map(String::from));
    for seed in 0..part.seeds {
        let t0 = Instant::now();
        let r = reorder(&m, kind, &part.config(seed))?;
        let reorder_time = t0.elapsed();
        let (min, median, checksum) = if let Some(s) = &r.splitting {
            let parts: Vec<IcsrMatrix> = s
                .parts(&m)
                .iter()
                .map(|p| IcsrMatrix::from_csr(&CsrMatrix::from_triplet(p)))
                .collect();
            let mm = MultiMatrix::new(parts)?;
            let (min, med, _) = time_calls(|| spmv_multi(&mm, &x).unwrap().iter().sum(), warmup, reps);
            (min, med, spmv_multi(&mm, &x)?.iter().sum::<f64>())
        } else {
            let bf = r.block_form.as_ref().expect("permutation methods carry a block form");
            let permuted = apply_permutations(&m, &bf.row_perm, &bf.col_perm)?;
            let pcsr = CsrMatrix::from_triplet(&permuted);
            let px = bf.col_perm.apply_to_vector(&x);
            let (min, med, _) = time_calls(|| spmv_csr(&pcsr, &px).unwrap().iter().sum(), warmup, reps);
            (min, med, spmv_csr(&pcsr, &px)?.iter().sum::<f64>())
        };
        let normalized = median.as_secs_f64() / base_median.as_secs_f64();
        // SpMxV calls needed before the reordering cost pays for itself
        let gain = base_median.as_secs_f64() - median.as_secs_f64();
        let amortization = if gain > 0.0 {
            format!("{:.0}", (reorder_time.as_secs_f64() / gain).ceil())
        } else {
            String::new()
        };
        emit(sep, &[
            name.clone(),
            kind.name().into(),
            seed.to_string(),
            r.k.to_string(),
            reps.to_string(),
            warmup.to_string(),
            min.as_nanos().to_string(),
            median.as_nanos().to_string(),
            format!("{normalized:.4}"),
            format!("{:.3}", reorder_time.as_secs_f64() * 1e3),
            amortization,
            format!("{checksum:.6e}"),
        ]);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    matrix: &Path,
    method: Option<&str>,
    row_perm: Option<&Path>,
    col_perm: Option<&Path>,
    splitting: Option<&Path>,
    part: &PartitionFlags,
    line_bytes: u64,
    out: OutFormat,
) -> anyhow::Result<()> {
    let (m, name) = load_matrix(matrix)?;
    let cc = CacheConfig::new(part.cache_bytes, line_bytes)?;
    let sep = out.sep();
    emit(sep, &["matrix", "method", "cache_bytes", "line_bytes", "phi_x", "phi_y", "bound", "holds"].map(String::from));
    let row = |method: &str, phi_x: u64, phi_y: u64, bound: Option<u64>, holds: Option<bool>| {
        emit(sep, &[
            name.clone(),
            method.into(),
            part.cache_bytes.to_string(),
            line_bytes.to_string(),
            phi_x.to_string(),
            phi_y.to_string(),
            bound.map(|b| b.to_string()).unwrap_or_default(),
            holds.map(|h| h.to_string()).unwrap_or_default(),
        ]);
    };

    if let Some(path) = splitting {
        let s = Splitting::read_file(path)?;
        let parts: Vec<IcsrMatrix> = s
            .parts(&m)
            .iter()
            .map(|p| IcsrMatrix::from_csr(&CsrMatrix::from_triplet(p)))
            .collect();
        let counts = simulate(&trace_multi(&MultiMatrix::new(parts)?), &cc);
        row("file", counts.phi_x(), counts.phi_y(), None, None);
        return Ok(());
    }
    if let (Some(rp), Some(cp)) = (row_perm, col_perm) {
        let rp = Permutation::read_file(rp)?;
        let cp = Permutation::read_file(cp)?;
        let permuted = apply_permutations(&m, &rp, &cp)?;
        let counts = simulate(&trace_csr(&CsrMatrix::from_triplet(&permuted)), &cc);
        row("file", counts.phi_x(), counts.phi_y(), None, None);
        return Ok(());
    }

    let kind = MethodKind::parse(method.unwrap_or("identity"))?;
    for seed in 0..part.seeds {
        let r = reorder(&m, kind, &part.config(seed))?;
        let report = check_bounds(&r, &m, &cc)?;
        // certified miss bounds belong to the partitioning methods; baseline
        // orderings report plain miss counts
        let (bound, holds) = if kind.is_hp() {
            (Some(report.bound_value), Some(report.holds))
        } else {
            (None, None)
        };
        row(kind.name(), report.phi_x, report.phi_y, bound, holds);
    }
    Ok(())
}

fn cmd_stats(matrix: &Path, out: OutFormat) -> anyhow::Result<()> {
    let (m, name) = load_matrix(matrix)?;
    let s = matrix_stats(&m)?;
    let sep = out.sep();
    emit(sep, &["matrix", "n_rows", "n_cols", "nnz", "row_avg", "row_max", "row_cov", "col_avg", "col_max", "col_cov"].map(String::from));
    emit(sep, &[
        name,
        s.n_rows.to_string(),
        s.n_cols.to_string(),
        s.nnz.to_string(),
        format!("{:.2}", s.row.avg),
        s.row.max.to_string(),
        format!("{:.2}", s.row.cov),
        format!("{:.2}", s.col.avg),
        s.col.max.to_string(),
        format!("{:.2}", s.col.cov),
    ]);
    Ok(())
}

fn cmd_report(files: &[PathBuf], out: OutFormat) -> anyhow::Result<()> {
    if files.is_empty() {
        bail!(spmv_locality::Error::InvalidConfig("report needs at least one bench CSV".into()));
    }
    // per method: (count, sum of ln(normalized), sum of ln(median_ns), amortizations)
    let mut agg: std::collections::BTreeMap<String, (usize, f64, f64, Vec<f64>)> = Default::default();
    for file in files {
        let text = std::fs::read_to_string(file)
            .with_context(|| format!("reading `{}`", file.display()))?;
        let mut lines = text.lines();
        let header = lines.next().map(|h| if h.contains('\t') { ('\t', h) } else { (',', h) });
        let Some((sep, header)) = header else { continue };
        let cols: Vec<&str> = header.split(sep).collect();
        let col = |name: &str| cols.iter().position(|&c| c == name);
        let (Some(mi), Some(med), Some(norm)) = (col("method"), col("median_ns"), col("normalized")) else {
            bail!(spmv_locality::Error::InvalidData(format!(
                "`{}` is not a bench CSV (missing method/median_ns/normalized)",
                file.display()
            )));
        };
        let amort = col("amortization");
        for line in lines {
            let f: Vec<&str> = line.split(sep).collect();
            if f.len() <= med.max(norm).max(mi) {
                continue;
            }
            let median_ns: f64 = f[med].parse().with_context(|| format!("bad median_ns in `{}`", file.display()))?;
            let normalized: f64 = f[norm].parse().with_context(|| format!("bad normalized in `{}`", file.display()))?;
            let entry = agg.entry(f[mi].to_string()).or_insert((0, 0.0, 0.0, Vec::new()));
            entry.0 += 1;
            entry.1 += normalized.ln();
            entry.2 += median_ns.ln();
            if let Some(a) = amort {
                if let Ok(v) = f[a].parse::<f64>() {
                    entry.3.push(v);
                }
            }
        }
    }
    let sep = out.sep();
    emit(sep, &["method", "n", "median_ns_gm", "normalized_gm", "amortization_gm"].map(String::from));
    for (method, (n, norm_ln, med_ln, amorts)) in agg {
        let gm = |sum: f64, n: usize| (sum / n as f64).exp();
        let amort_gm = if amorts.is_empty() {
            String::new()
        } else {
            let s: f64 = amorts.iter().map(|v| v.ln()).sum();
            format!("{:.0}", gm(s, amorts.len()))
        };
        emit(sep, &[
            method,
            n.to_string(),
            format!("{:.0}", gm(med_ln, n)),
            format!("{:.4}", gm(norm_ln, n)),
            amort_gm,
        ]);
    }
    Ok(())
}
