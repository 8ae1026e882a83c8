//! Kernel benchmark harness.
//!
//! Every kernel runs the same seeded workload: raw in-bucket counts, exact
//! queries and one-difference inexact queries. Query answers are folded into
//! a CRC32 checksum so runs with different kernels can be compared.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use fmpm_core::{FmIndex, Kernel, PsiStep, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    /// Resolved kernel name.
    pub kernel: String,
    pub bucket_counts_per_sec: f64,
    pub exact_queries_per_sec: f64,
    pub inexact_queries_per_sec: f64,
    pub wall_time: Duration,
    pub checksum: u32,
}

#[derive(Clone, Debug)]
pub struct Workload {
    pub buckets: Vec<(usize, usize, Symbol)>,
    pub exact: Vec<Vec<u8>>,
    pub inexact: Vec<Vec<u8>>,
}

pub const EXACT_LEN: usize = 20;
pub const INEXACT_LEN: usize = 12;
pub const INEXACT_DIFFS: usize = 1;

/// Reads up to `len` reference characters ending just before `SA[row]`.
fn spell_backward(index: &FmIndex, mut row: usize, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        match index.psi_inverse_fused(row) {
            PsiStep::Sentinel => break,
            PsiStep::Row { symbol, row: next } => {
                out.push(symbol.to_ascii());
                row = next;
            }
        }
    }
    out.reverse();
    out
}

fn sample_pattern(index: &FmIndex, rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    let row = rng.gen_range(0..=index.len());
    let mut p = spell_backward(index, row, len);
    while p.len() < len {
        p.push(b"ACGT"[rng.gen_range(0..4)]);
    }
    p
}

impl Workload {
    /// `iters` exact queries, a tenth as many inexact ones, and 64 bucket
    /// counts per iteration.
    pub fn generate(index: &FmIndex, iters: usize, seed: u64) -> Workload {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nb = index.buckets().len();
        let buckets = (0..iters * 64)
            .map(|_| {
                (
                    rng.gen_range(0..nb),
                    rng.gen_range(0..=128),
                    Symbol::from_code(rng.gen_range(0..4)),
                )
            })
            .collect();
        let exact = (0..iters)
            .map(|_| sample_pattern(index, &mut rng, EXACT_LEN))
            .collect();
        let inexact = (0..(iters / 10).max(1))
            .map(|_| {
                let mut p = sample_pattern(index, &mut rng, INEXACT_LEN);
                let i = rng.gen_range(0..p.len());
                p[i] = b"ACGT"[rng.gen_range(0..4)];
                p
            })
            .collect();
        Workload {
            buckets,
            exact,
            inexact,
        }
    }
}

fn per_sec(count: usize, elapsed: Duration) -> f64 {
    count as f64 / elapsed.as_secs_f64().max(1e-9)
}

pub fn run_kernel(index: &FmIndex, kernel: Kernel, work: &Workload) -> BenchReport {
    let index = index.clone().with_kernel(kernel);
    let mut hasher = crc32fast::Hasher::new();
    let start = Instant::now();

    let t = Instant::now();
    let mut total = 0u64;
    for &(b, prefix, sym) in &work.buckets {
        total += u64::from(kernel.count(black_box(&index.buckets()[b].chars), prefix, sym));
    }
    let bucket_time = t.elapsed();
    hasher.update(&total.to_le_bytes());

    let t = Instant::now();
    for p in &work.exact {
        for hit in index.find_exact(black_box(p), None).hits {
            hasher.update(&hit.global_pos.to_le_bytes());
        }
        hasher.update(b"|");
    }
    let exact_time = t.elapsed();

    let t = Instant::now();
    for p in &work.inexact {
        for hit in index.find(black_box(p), INEXACT_DIFFS, None).hits {
            hasher.update(&hit.global_pos.to_le_bytes());
            hasher.update(&(hit.diffs as u64).to_le_bytes());
        }
        hasher.update(b"|");
    }
    let inexact_time = t.elapsed();

    BenchReport {
        kernel: kernel.name().to_owned(),
        bucket_counts_per_sec: per_sec(work.buckets.len(), bucket_time),
        exact_queries_per_sec: per_sec(work.exact.len(), exact_time),
        inexact_queries_per_sec: per_sec(work.inexact.len(), inexact_time),
        wall_time: start.elapsed(),
        checksum: hasher.finalize(),
    }
}

pub fn run_bench(index: &FmIndex, kernels: &[Kernel], iters: usize, seed: u64) -> Vec<BenchReport> {
    let work = Workload::generate(index, iters, seed);
    kernels.iter().map(|&k| run_kernel(index, k, &work)).collect()
}

pub const TSV_HEADER: &str =
    "kernel\tbucket_counts_per_s\texact_queries_per_s\tinexact_queries_per_s\twall_s\tchecksum";

pub fn format_tsv(reports: &[BenchReport]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{:.0}\t{:.1}\t{:.1}\t{:.6}\t{:08x}",
            r.kernel,
            r.bucket_counts_per_sec,
            r.exact_queries_per_sec,
            r.inexact_queries_per_sec,
            r.wall_time.as_secs_f64(),
            r.checksum
        );
    }
    out
}

/// Speedups relative to the first report; informational only.
pub fn format_summary(reports: &[BenchReport]) -> String {
    let mut out = String::new();
    let Some(first) = reports.first() else {
        return out;
    };
    let agree = reports.iter().all(|r| r.checksum == first.checksum);
    for r in reports {
        let _ = writeln!(
            out,
            "{:>8}: {:>7.2}x bucket counts, {:>5.2}x exact, {:>5.2}x inexact vs {}",
            r.kernel,
            r.bucket_counts_per_sec / first.bucket_counts_per_sec,
            r.exact_queries_per_sec / first.exact_queries_per_sec,
            r.inexact_queries_per_sec / first.inexact_queries_per_sec,
            first.kernel
        );
    }
    let _ = writeln!(
        out,
        "answer checksums {}",
        if agree { "agree" } else { "DIFFER" }
    );
    out
}
