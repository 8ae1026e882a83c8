//! `.fmi` index files.
//!
//! All integers are little-endian:
//!
//! ```text
//! "FMPM" | version u16 | flags u16 | n u64 | bucket_size u32 | sa_stride u32
//! | sentinel_row u64 | c[5] u64 | bucket_count u64
//! | bucket_count x (base[4] u64, 32 packed BWT bytes)
//! | sample_count u64 | sample_count x u64
//! | record_count u32 | record_count x (name_len u32, name, start u64, length u64)
//! | crc32 of everything before it
//! ```

use std::io::{self, Read, Write};

use fmpm_core::index::{FmIndexParts, OccBucket, Record, BUCKET_CHARS, SA_STRIDE};
use fmpm_core::{CTable, FmIndex, IndexError};
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"FMPM";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported index version {0}")]
    Version(u16),
    #[error("index file is truncated")]
    Truncated,
    #[error("index checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },
    #[error("malformed index: {0}")]
    Malformed(String),
    #[error("inconsistent index: {0}")]
    Inconsistent(#[from] IndexError),
}

impl FormatError {
    /// True for anything other than an underlying I/O failure.
    pub fn is_corrupt(&self) -> bool {
        !matches!(self, FormatError::Io(_))
    }
}

/// Encodes the index into a byte vector.
pub fn encode_index(index: &FmIndex) -> Vec<u8> {
    let parts = index.to_parts();
    let mut out = Vec::with_capacity(64 + parts.buckets.len() * 64 + parts.sa_samples.len() * 8);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&parts.n.to_le_bytes());
    out.extend_from_slice(&(BUCKET_CHARS as u32).to_le_bytes());
    out.extend_from_slice(&(SA_STRIDE as u32).to_le_bytes());
    out.extend_from_slice(&parts.sentinel_row.to_le_bytes());
    for c in parts.c.0 {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out.extend_from_slice(&(parts.buckets.len() as u64).to_le_bytes());
    for bucket in &parts.buckets {
        for b in bucket.base {
            out.extend_from_slice(&b.to_le_bytes());
        }
        out.extend_from_slice(&bucket.chars);
    }
    out.extend_from_slice(&(parts.sa_samples.len() as u64).to_le_bytes());
    for s in &parts.sa_samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out.extend_from_slice(&(parts.records.len() as u32).to_le_bytes());
    for r in &parts.records {
        out.extend_from_slice(&(r.name.len() as u32).to_le_bytes());
        out.extend_from_slice(r.name.as_bytes());
        out.extend_from_slice(&r.start.to_le_bytes());
        out.extend_from_slice(&r.length.to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

/// Writes the index and returns the number of bytes written.
pub fn serialize_index<W: Write>(index: &FmIndex, mut sink: W) -> io::Result<u64> {
    let bytes = encode_index(index);
    sink.write_all(&bytes)?;
    sink.flush()?;
    Ok(bytes.len() as u64)
}

pub fn deserialize_index<R: Read>(mut source: R) -> Result<FmIndex, FormatError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_index(&bytes)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(len).ok_or(FormatError::Truncated)?;
        let slice = self.data.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(slice)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], FormatError> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u16(&mut self) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.array()?))
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    /// Fails early when `count` items of `item_size` cannot fit in the rest.
    fn check_room(&self, count: u64, item_size: usize) -> Result<usize, FormatError> {
        let need = count.checked_mul(item_size as u64).ok_or(FormatError::Truncated)?;
        if need > self.remaining() as u64 {
            return Err(FormatError::Truncated);
        }
        Ok(count as usize)
    }
}

/// Decodes and validates an index from its full byte image.
pub fn decode_index(data: &[u8]) -> Result<FmIndex, FormatError> {
    let mut cur = Cursor { data, pos: 0 };
    if cur.array::<4>().map_err(|_| FormatError::BadMagic)? != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = cur.u16()?;
    if version != VERSION {
        return Err(FormatError::Version(version));
    }
    let _flags = cur.u16()?;
    let n = cur.u64()?;
    let bucket_size = cur.u32()?;
    let sa_stride = cur.u32()?;
    let sentinel_row = cur.u64()?;
    let mut c = [0u64; 5];
    for slot in &mut c {
        *slot = cur.u64()?;
    }

    let bucket_count = cur.u64()?;
    let bucket_count = cur.check_room(bucket_count, 64)?;
    let mut buckets = Vec::with_capacity(bucket_count);
    for _ in 0..bucket_count {
        let mut base = [0u64; 4];
        for b in &mut base {
            *b = cur.u64()?;
        }
        buckets.push(OccBucket {
            base,
            chars: cur.array()?,
        });
    }

    let sample_count = cur.u64()?;
    let sample_count = cur.check_room(sample_count, 8)?;
    let sa_samples = (0..sample_count).map(|_| cur.u64()).collect::<Result<Vec<_>, _>>()?;

    let record_count = cur.u32()?;
    let record_count = cur.check_room(u64::from(record_count), 20)?;
    let mut records = Vec::with_capacity(record_count);
    for _ in 0..record_count {
        let name_len = cur.u32()? as usize;
        let name = std::str::from_utf8(cur.take(name_len)?)
            .map_err(|_| FormatError::Malformed("record name is not UTF-8".into()))?
            .to_owned();
        let start = cur.u64()?;
        let length = cur.u64()?;
        records.push(Record { name, start, length });
    }

    let body_len = cur.pos;
    let stored = cur.u32()?;
    if cur.remaining() != 0 {
        return Err(FormatError::Malformed(format!("{} trailing bytes", cur.remaining())));
    }
    let computed = crc32fast::hash(&data[..body_len]);
    if stored != computed {
        return Err(FormatError::Checksum { stored, computed });
    }

    if bucket_size as usize != BUCKET_CHARS || sa_stride as usize != SA_STRIDE {
        return Err(FormatError::Malformed(format!(
            "bucket size {bucket_size} / SA stride {sa_stride} not supported"
        )));
    }
    Ok(FmIndex::from_parts(FmIndexParts {
        n,
        c: CTable(c),
        sentinel_row,
        buckets,
        sa_samples,
        records,
    })?)
}
