use super::{OccCounts, BUCKET_BYTES, BUCKET_CHARS};
use crate::alphabet::Symbol;

#[inline]
fn code_at(bucket: &[u8; BUCKET_BYTES], i: usize) -> u8 {
    (bucket[i / 4] >> (2 * (i % 4))) & 3
}

/// Counts `symbol` among the first `prefix_len` characters, one at a time.
pub fn count_bucket_scalar(bucket: &[u8; BUCKET_BYTES], prefix_len: usize, symbol: Symbol) -> u32 {
    assert!(prefix_len <= BUCKET_CHARS, "prefix_len {prefix_len} > 128");
    (0..prefix_len)
        .filter(|&i| code_at(bucket, i) == symbol.code())
        .count() as u32
}

pub fn count_bucket_all4_scalar(bucket: &[u8; BUCKET_BYTES], prefix_len: usize) -> OccCounts {
    assert!(prefix_len <= BUCKET_CHARS, "prefix_len {prefix_len} > 128");
    let mut counts = [0u64; 4];
    for i in 0..prefix_len {
        counts[code_at(bucket, i) as usize] += 1;
    }
    OccCounts(counts)
}

/// Decodes the character at position `i` of the bucket.
#[inline]
pub fn symbol_at(bucket: &[u8; BUCKET_BYTES], i: usize) -> Symbol {
    Symbol::from_code(code_at(bucket, i))
}
