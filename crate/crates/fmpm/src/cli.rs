//! `fmpm` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fmpm_core::search::is_degenerate;
use fmpm_core::{build_index, FmIndex, Hits, KernelChoice, Record};
use rayon::prelude::*;

use crate::bench;
use crate::fasta::{read_fasta, FastaError};
use crate::format::{deserialize_index, serialize_index, FormatError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CORRUPT: i32 = 3;

pub const MATCH_HEADER: &str = "pattern_id\trecord\toffset\tdiffs";

#[derive(Debug, Parser)]
#[command(name = "fmpm", version, about = "FM-index DNA pattern matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index file from a FASTA reference.
    Index {
        fasta: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Replace non-ACGT characters with A instead of failing.
        #[arg(long)]
        sanitize: bool,
    },
    /// Search patterns and print one TSV row per hit.
    Match {
        index: PathBuf,
        #[arg(short = 'p', long, required_unless_present = "file", conflicts_with = "file")]
        pattern: Option<String>,
        /// One pattern per line, or FASTA (record names become pattern ids).
        #[arg(short = 'f', long)]
        file: Option<PathBuf>,
        /// Maximum number of differences.
        #[arg(short = 'z', long = "max-diff", default_value_t = 0, allow_negative_numbers = true)]
        max_diff: i64,
        #[arg(long, env = "FMPM_KERNEL", default_value = "auto")]
        kernel: KernelChoice,
        /// Keep at most N hits per pattern.
        #[arg(long)]
        max_hits: Option<usize>,
        /// Worker threads for batch queries (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare kernels on a seeded workload.
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "scalar,nibble,auto")]
        kernels: Vec<KernelChoice>,
    },
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Index {
            fasta,
            output,
            sanitize,
        } => cmd_index(&fasta, &output, sanitize, err),
        Command::Match {
            index,
            pattern,
            file,
            max_diff,
            kernel,
            max_hits,
            threads,
        } => {
            if max_diff < 0 {
                let _ = writeln!(err, "error: --max-diff must be >= 0");
                return EXIT_USAGE;
            }
            let opts = MatchOptions {
                max_diffs: max_diff as usize,
                kernel,
                max_hits,
                threads,
            };
            cmd_match(&index, pattern, file.as_deref(), &opts, out, err)
        }
        Command::Bench {
            index,
            iters,
            seed,
            kernels,
        } => cmd_bench(&index, iters, seed, &kernels, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn io(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{context}: {e}"),
        }
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path.display(), e))
}

pub fn load_index(path: &Path) -> Result<FmIndex, CliError> {
    let file = open(path)?;
    deserialize_index(BufReader::new(file)).map_err(|e: FormatError| CliError {
        code: if e.is_corrupt() { EXIT_CORRUPT } else { EXIT_IO },
        message: format!("{}: {e}", path.display()),
    })
}

pub fn cmd_index(fasta: &Path, output: &Path, sanitize: bool, err: &mut dyn Write) -> Result<(), CliError> {
    let report = read_fasta(BufReader::new(open(fasta)?), sanitize).map_err(|e| match e {
        FastaError::Io(e) => CliError::io(fasta.display(), e),
        other => CliError {
            code: EXIT_IO,
            message: format!("{}: {other}", fasta.display()),
        },
    })?;
    if report.substitutions > 0 {
        let _ = writeln!(
            err,
            "warning: replaced {} non-ACGT characters with A",
            report.substitutions
        );
    }

    let total: usize = report.records.iter().map(|r| r.sequence.len()).sum();
    let mut reference = Vec::with_capacity(total);
    let mut records = Vec::with_capacity(report.records.len());
    for rec in &report.records {
        records.push(Record::new(rec.name.clone(), reference.len() as u64, rec.sequence.len() as u64));
        reference.extend_from_slice(&rec.sequence);
    }
    let index = build_index(&reference, records).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: e.to_string(),
    })?;

    let file = File::create(output).map_err(|e| CliError::io(output.display(), e))?;
    let bytes =
        serialize_index(&index, BufWriter::new(file)).map_err(|e| CliError::io(output.display(), e))?;
    let _ = writeln!(
        err,
        "indexed {} records, {} bases, {} bytes -> {}",
        index.records().len(),
        index.len(),
        bytes,
        output.display()
    );
    Ok(())
}

#[derive(Clone, Debug)]
pub struct MatchOptions {
    pub max_diffs: usize,
    pub kernel: KernelChoice,
    pub max_hits: Option<usize>,
    pub threads: Option<usize>,
}

/// Patterns with their ids, in input order.
pub fn read_patterns<R: BufRead>(source: R) -> io::Result<Vec<(String, Vec<u8>)>> {
    let mut out: Vec<(String, Vec<u8>)> = Vec::new();
    let mut fasta = None;
    for line in source.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let is_fasta = *fasta.get_or_insert(line.starts_with('>'));
        if is_fasta {
            if let Some(name) = line.strip_prefix('>') {
                let id = name.split_whitespace().next().unwrap_or("").to_owned();
                out.push((id, Vec::new()));
            } else if let Some(last) = out.last_mut() {
                last.1.extend_from_slice(line.as_bytes());
            }
        } else {
            out.push((out.len().to_string(), line.as_bytes().to_vec()));
        }
    }
    Ok(out)
}

/// Runs every pattern and returns its hits in input order.
pub fn match_patterns(index: &FmIndex, patterns: &[(String, Vec<u8>)], opts: &MatchOptions) -> Vec<Hits> {
    patterns
        .par_iter()
        .map(|(_, p)| index.find(p, opts.max_diffs, opts.max_hits))
        .collect()
}

pub fn cmd_match(
    index_path: &Path,
    pattern: Option<String>,
    file: Option<&Path>,
    opts: &MatchOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let mut index = load_index(index_path)?;
    index.set_kernel(opts.kernel.resolve());

    let patterns = match (pattern, file) {
        (Some(p), _) => vec![("0".to_owned(), p.into_bytes())],
        (None, Some(path)) => {
            read_patterns(BufReader::new(open(path)?)).map_err(|e| CliError::io(path.display(), e))?
        }
        (None, None) => {
            return Err(CliError {
                code: EXIT_USAGE,
                message: "one of --pattern or --file is required".into(),
            })
        }
    };
    for (id, p) in &patterns {
        if is_degenerate(p) {
            let _ = writeln!(err, "warning: pattern {id} is empty or contains non-ACGT characters; no hits");
        }
    }

    let results = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?
            .install(|| match_patterns(&index, &patterns, opts)),
        None => match_patterns(&index, &patterns, opts),
    };

    let mut w = BufWriter::new(out);
    let write_err = |e| CliError::io("stdout", e);
    writeln!(w, "{MATCH_HEADER}").map_err(write_err)?;
    for ((id, _), hits) in patterns.iter().zip(&results) {
        if hits.truncated {
            let _ = writeln!(err, "warning: pattern {id} truncated to {} hits", hits.hits.len());
        }
        for h in &hits.hits {
            writeln!(
                w,
                "{id}\t{}\t{}\t{}",
                index.records()[h.record].name,
                h.offset,
                h.diffs
            )
            .map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)?;
    Ok(())
}

pub fn cmd_bench(
    index_path: &Path,
    iters: usize,
    seed: u64,
    kernels: &[KernelChoice],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if iters == 0 || kernels.is_empty() {
        return Err(CliError {
            code: EXIT_USAGE,
            message: "--iters must be positive and --kernels non-empty".into(),
        });
    }
    let index = load_index(index_path)?;
    let resolved: Vec<_> = kernels.iter().map(|k| k.resolve()).collect();
    let reports = bench::run_bench(&index, &resolved, iters, seed);
    write!(out, "{}", bench::format_tsv(&reports)).map_err(|e| CliError::io("stdout", e))?;
    let _ = write!(err, "{}", bench::format_summary(&reports));
    Ok(())
}
