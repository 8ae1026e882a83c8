//! Minimal FASTA reader for DNA references.

use std::io::{self, BufRead};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaRecord {
    /// First whitespace-delimited token of the header.
    pub name: String,
    /// Upper-case `ACGT`.
    pub sequence: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FastaReport {
    pub records: Vec<FastaRecord>,
    /// Characters replaced by `A` under `sanitize`.
    pub substitutions: u64,
}

#[derive(Debug, Error)]
pub enum FastaError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("FASTA input is empty")]
    Empty,
    #[error("line {line}: sequence data before the first '>' header")]
    MissingHeader { line: usize },
    #[error("line {line}: header has no name")]
    EmptyName { line: usize },
    #[error("record {name:?} has an empty sequence")]
    EmptySequence { name: String },
    #[error("record {name:?}: invalid character {byte:?} at offset {offset}")]
    InvalidCharacter { name: String, offset: usize, byte: char },
}

/// Parses every record. Sequence lines may be folded and are case-insensitive.
///
/// Without `sanitize`, any character outside `ACGT` is an error reporting the
/// record and 0-based offset; with it, such characters become `A` and are
/// counted in [`FastaReport::substitutions`].
pub fn read_fasta<R: BufRead>(source: R, sanitize: bool) -> Result<FastaReport, FastaError> {
    let mut report = FastaReport::default();
    let mut current: Option<FastaRecord> = None;

    let finish = |rec: FastaRecord, out: &mut Vec<FastaRecord>| {
        if rec.sequence.is_empty() {
            return Err(FastaError::EmptySequence { name: rec.name });
        }
        out.push(rec);
        Ok(())
    };

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if let Some(header) = line.strip_prefix('>') {
            if let Some(rec) = current.take() {
                finish(rec, &mut report.records)?;
            }
            let name = header.split_whitespace().next().unwrap_or("");
            if name.is_empty() {
                return Err(FastaError::EmptyName { line: lineno + 1 });
            }
            current = Some(FastaRecord {
                name: name.to_owned(),
                sequence: Vec::new(),
            });
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let Some(rec) = current.as_mut() else {
            return Err(FastaError::MissingHeader { line: lineno + 1 });
        };
        for byte in line.bytes().filter(|b| !b.is_ascii_whitespace()) {
            let upper = byte.to_ascii_uppercase();
            let mapped = match upper {
                b'A' | b'C' | b'G' | b'T' => upper,
                _ if sanitize => {
                    report.substitutions += 1;
                    b'A'
                }
                _ => {
                    return Err(FastaError::InvalidCharacter {
                        name: rec.name.clone(),
                        offset: rec.sequence.len(),
                        byte: byte as char,
                    })
                }
            };
            rec.sequence.push(mapped);
        }
    }
    match current {
        Some(rec) => finish(rec, &mut report.records)?,
        None => return Err(FastaError::Empty),
    }
    Ok(report)
}
