//! Bucketed FM-index.
//!
//! Each [`OccBucket`] carries the occurrence counters of all four symbols at
//! the bucket start followed by 128 BWT characters in 2-bit form. The `$`
//! sentinel is stored as code 0 at `sentinel_row`; bucket bases count stored
//! codes, so any `A` count whose range covers `sentinel_row` is one too high
//! and is corrected when queried.

use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::{BwtChar, Symbol};
use crate::bwt::CTable;
use crate::error::{BuildError, IndexError};
use crate::kernel::{scalar, Kernel, OccCounts, OccPair, BUCKET_BYTES};
use crate::suffix_array::suffix_array_of_symbols;

pub use crate::kernel::BUCKET_CHARS;

/// Suffix array rows that are multiples of this are sampled.
pub const SA_STRIDE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccBucket {
    /// Stored-code counts in all BWT positions before this bucket.
    pub base: [u64; 4],
    pub chars: [u8; BUCKET_BYTES],
}

/// A named slice `[start, start + length)` of the concatenated reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub start: u64,
    pub length: u64,
}

impl Record {
    pub fn new(name: impl Into<String>, start: u64, length: u64) -> Record {
        Record {
            name: name.into(),
            start,
            length,
        }
    }

    pub fn end(&self) -> u64 {
        self.start + self.length
    }
}

fn records_tile(records: &[Record], n: u64) -> bool {
    let mut next = 0;
    for r in records {
        if r.start != next || r.length == 0 {
            return false;
        }
        next = r.end();
    }
    !records.is_empty() && next == n
}

/// Raw fields of an index, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmIndexParts {
    pub n: u64,
    pub c: CTable,
    pub sentinel_row: u64,
    pub buckets: Vec<OccBucket>,
    pub sa_samples: Vec<u64>,
    pub records: Vec<Record>,
}

/// Immutable FM-index; `Sync`, so one instance can serve concurrent queries.
#[derive(Clone, Debug)]
pub struct FmIndex {
    n: usize,
    c: CTable,
    sentinel_row: usize,
    buckets: Vec<OccBucket>,
    sa_samples: Vec<u64>,
    records: Vec<Record>,
    kernel: Kernel,
}

/// Equality covers the stored data only, not the selected kernel.
impl PartialEq for FmIndex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.c == other.c
            && self.sentinel_row == other.sentinel_row
            && self.buckets == other.buckets
            && self.sa_samples == other.sa_samples
            && self.records == other.records
    }
}

impl Eq for FmIndex {}

/// Builds the index of the concatenated `reference` (ASCII `ACGT`).
///
/// `records` must tile the reference: the first starts at 0, each next one
/// starts where the previous ended, and the last ends at `reference.len()`.
pub fn build_index(reference: &[u8], records: Vec<Record>) -> Result<FmIndex, BuildError> {
    if reference.is_empty() {
        return Err(BuildError::EmptyReference);
    }
    let symbols = reference
        .iter()
        .enumerate()
        .map(|(offset, &byte)| {
            Symbol::from_ascii(byte).ok_or(BuildError::InvalidCharacter { offset, byte })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = symbols.len();
    if !records_tile(&records, n as u64) {
        return Err(BuildError::RecordLayout);
    }

    let sa = suffix_array_of_symbols(&symbols);
    let rows = n + 1;
    let mut buckets = Vec::with_capacity(rows.div_ceil(BUCKET_CHARS));
    let mut running = [0u64; 4];
    let mut sentinel_row = 0;
    for (row, &pos) in sa.entries().iter().enumerate() {
        if row % BUCKET_CHARS == 0 {
            buckets.push(OccBucket {
                base: running,
                chars: [0; BUCKET_BYTES],
            });
        }
        let code = if pos == 0 {
            sentinel_row = row;
            0
        } else {
            symbols[pos - 1].code()
        };
        running[code as usize] += 1;
        let slot = row % BUCKET_CHARS;
        let bucket = buckets.last_mut().expect("bucket pushed above");
        bucket.chars[slot / 4] |= code << (2 * (slot % 4));
    }

    let mut totals = running;
    totals[0] -= 1;
    let sa_samples = sa
        .entries()
        .iter()
        .step_by(SA_STRIDE)
        .map(|&p| p as u64)
        .collect();

    Ok(FmIndex {
        n,
        c: CTable::from_totals(totals),
        sentinel_row,
        buckets,
        sa_samples,
        records,
        kernel: Kernel::default(),
    })
}

impl FmIndex {
    /// Validates raw parts, e.g. after reading them from disk.
    pub fn from_parts(parts: FmIndexParts) -> Result<FmIndex, IndexError> {
        let n = usize::try_from(parts.n)
            .ok()
            .filter(|&n| n < usize::MAX / 2)
            .ok_or(IndexError::SentinelRow { row: parts.sentinel_row, n: parts.n })?;
        let rows = n + 1;
        let expected_buckets = rows.div_ceil(BUCKET_CHARS);
        if parts.buckets.len() != expected_buckets {
            return Err(IndexError::BucketCount {
                expected: expected_buckets,
                found: parts.buckets.len(),
            });
        }
        let expected_samples = n / SA_STRIDE + 1;
        if parts.sa_samples.len() != expected_samples {
            return Err(IndexError::SampleCount {
                expected: expected_samples,
                found: parts.sa_samples.len(),
            });
        }
        if parts.sentinel_row > parts.n {
            return Err(IndexError::SentinelRow {
                row: parts.sentinel_row,
                n: parts.n,
            });
        }
        if !records_tile(&parts.records, parts.n) {
            return Err(IndexError::RecordLayout);
        }

        let mut running = [0u64; 4];
        for (j, bucket) in parts.buckets.iter().enumerate() {
            if bucket.base != running {
                return Err(IndexError::BucketBase { bucket: j });
            }
            let real = (rows - j * BUCKET_CHARS).min(BUCKET_CHARS);
            let counts = scalar::count_bucket_all4_scalar(&bucket.chars, real);
            if scalar::count_bucket_all4_scalar(&bucket.chars, BUCKET_CHARS).0[1..] != counts.0[1..] {
                return Err(IndexError::Padding);
            }
            for (r, c) in running.iter_mut().zip(counts.0) {
                *r += c;
            }
        }
        let sentinel = parts.sentinel_row as usize;
        let sentinel_code =
            scalar::symbol_at(&parts.buckets[sentinel / BUCKET_CHARS].chars, sentinel % BUCKET_CHARS);
        if sentinel_code != Symbol::A || running[0] == 0 {
            return Err(IndexError::SentinelRow {
                row: parts.sentinel_row,
                n: parts.n,
            });
        }
        running[0] -= 1;
        if !parts.c.is_consistent() || parts.c != CTable::from_totals(running) {
            return Err(IndexError::CTable);
        }

        Ok(FmIndex {
            n,
            c: parts.c,
            sentinel_row: sentinel,
            buckets: parts.buckets,
            sa_samples: parts.sa_samples,
            records: parts.records,
            kernel: Kernel::default(),
        })
    }

    pub fn to_parts(&self) -> FmIndexParts {
        FmIndexParts {
            n: self.n as u64,
            c: self.c,
            sentinel_row: self.sentinel_row as u64,
            buckets: self.buckets.clone(),
            sa_samples: self.sa_samples.clone(),
            records: self.records.clone(),
        }
    }

    /// Reference length, excluding `$`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn c_table(&self) -> &CTable {
        &self.c
    }

    pub fn sentinel_row(&self) -> usize {
        self.sentinel_row
    }

    pub fn buckets(&self) -> &[OccBucket] {
        &self.buckets
    }

    pub fn sa_samples(&self) -> &[u64] {
        &self.sa_samples
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn set_kernel(&mut self, kernel: Kernel) {
        self.kernel = kernel;
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn bwt_char_at(&self, row: usize) -> BwtChar {
        assert!(row <= self.n, "row {row} out of range");
        if row == self.sentinel_row {
            return BwtChar::Sentinel;
        }
        let bucket = &self.buckets[row / BUCKET_CHARS];
        BwtChar::Symbol(scalar::symbol_at(&bucket.chars, row % BUCKET_CHARS))
    }

    /// Decodes the full BWT; mostly useful for tests and debugging.
    pub fn bwt(&self) -> Vec<BwtChar> {
        (0..=self.n).map(|i| self.bwt_char_at(i)).collect()
    }

    #[inline]
    fn sentinel_fix(&self, k: usize) -> u64 {
        u64::from(self.sentinel_row <= k)
    }

    /// Counters over `BWT[0..=k]`.
    #[inline]
    pub fn occ_all(&self, k: usize) -> OccCounts {
        assert!(k <= self.n, "row {k} out of range");
        let bucket = &self.buckets[k / BUCKET_CHARS];
        let mut counts = OccCounts(bucket.base) + self.kernel.count_all4(&bucket.chars, k % BUCKET_CHARS + 1);
        counts.0[0] -= self.sentinel_fix(k);
        counts
    }

    /// Occurrences of `symbol` in `BWT[0..=k]`; `k == -1` gives 0.
    #[inline]
    pub fn occ(&self, symbol: Symbol, k: isize) -> u64 {
        if k < 0 {
            return 0;
        }
        let k = k as usize;
        assert!(k <= self.n, "row {k} out of range");
        let bucket = &self.buckets[k / BUCKET_CHARS];
        let mut count = bucket.base[symbol.index()]
            + u64::from(self.kernel.count(&bucket.chars, k % BUCKET_CHARS + 1, symbol));
        if symbol == Symbol::A {
            count -= self.sentinel_fix(k);
        }
        count
    }

    /// All eight counters at `km1` and `l`; reads the bucket once when both
    /// rows share it.
    pub fn occ_pair_all(&self, km1: isize, l: usize) -> OccPair {
        assert!(km1 <= l as isize, "km1 {km1} > l {l}");
        assert!(l <= self.n, "row {l} out of range");
        if km1 < 0 {
            return OccPair {
                at_km1: OccCounts::default(),
                at_l: self.occ_all(l),
            };
        }
        let km1 = km1 as usize;
        let (bk, bl) = (km1 / BUCKET_CHARS, l / BUCKET_CHARS);
        if bk != bl {
            return OccPair {
                at_km1: self.occ_all(km1),
                at_l: self.occ_all(l),
            };
        }
        let bucket = &self.buckets[bk];
        let (a, b) = self
            .kernel
            .count_pair(&bucket.chars, km1 % BUCKET_CHARS + 1, l % BUCKET_CHARS + 1);
        let base = OccCounts(bucket.base);
        let mut at_km1 = base + a;
        let mut at_l = base + b;
        at_km1.0[0] -= self.sentinel_fix(km1);
        at_l.0[0] -= self.sentinel_fix(l);
        OccPair { at_km1, at_l }
    }

    /// Decodes `BWT[row]` and counts it up to `row` from one bucket read.
    #[inline]
    pub(crate) fn char_and_occ(&self, row: usize) -> Option<(Symbol, u64)> {
        if row == self.sentinel_row {
            return None;
        }
        let bucket = &self.buckets[row / BUCKET_CHARS];
        let slot = row % BUCKET_CHARS;
        let symbol = scalar::symbol_at(&bucket.chars, slot);
        let mut count = bucket.base[symbol.index()] + u64::from(self.kernel.count(&bucket.chars, slot + 1, symbol));
        if symbol == Symbol::A {
            count -= self.sentinel_fix(row);
        }
        Some((symbol, count))
    }

    /// Maps a global position to `(record index, offset within record)`.
    pub fn record_at(&self, pos: u64) -> Option<(usize, u64)> {
        let idx = self.records.partition_point(|r| r.start <= pos).checked_sub(1)?;
        let r = &self.records[idx];
        (pos < r.end()).then(|| (idx, pos - r.start))
    }
}
