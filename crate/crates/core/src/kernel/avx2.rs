//! AVX2 version of the nibble-lookup kernel: one 256-bit register per bucket.
//!
//! Every function here requires AVX2; callers go through [`super::Kernel`],
//! which can only hold this variant after the CPU check succeeded.

use core::arch::x86_64::*;

use super::nibble::{lane_mask, SAD_BASELINE, TABLES};
use super::{OccCounts, BUCKET_BYTES, BUCKET_CHARS};
use crate::alphabet::Symbol;

#[inline]
#[target_feature(enable = "avx2")]
unsafe fn masked_load(bucket: &[u8; BUCKET_BYTES], prefix_len: usize) -> __m256i {
    let data = _mm256_loadu_si256(bucket.as_ptr().cast());
    mask(data, prefix_len)
}

#[inline]
#[target_feature(enable = "avx2")]
unsafe fn mask(data: __m256i, prefix_len: usize) -> __m256i {
    let m = _mm256_set_epi64x(
        lane_mask(3, prefix_len) as i64,
        lane_mask(2, prefix_len) as i64,
        lane_mask(1, prefix_len) as i64,
        lane_mask(0, prefix_len) as i64,
    );
    _mm256_and_si256(data, m)
}

/// Returns the (complemented low, high) nibble lookups.
#[inline]
#[target_feature(enable = "avx2")]
unsafe fn lookup(masked: __m256i) -> (__m256i, __m256i) {
    let low = _mm256_set1_epi8(0x0f);
    let lo_nibbles = _mm256_and_si256(masked, low);
    let hi_nibbles = _mm256_and_si256(_mm256_srli_epi32(masked, 4), low);
    let lo_table = _mm256_broadcastsi128_si256(_mm_loadu_si128(TABLES.lo.as_ptr().cast()));
    let hi_table = _mm256_broadcastsi128_si256(_mm_loadu_si128(TABLES.hi.as_ptr().cast()));
    (
        _mm256_shuffle_epi8(lo_table, lo_nibbles),
        _mm256_shuffle_epi8(hi_table, hi_nibbles),
    )
}

/// Four per-lane SADs for one symbol, each `2040 - lane_count`.
#[inline]
#[target_feature(enable = "avx2")]
unsafe fn extract(lo: __m256i, hi: __m256i, code: u8) -> __m256i {
    let shift = _mm_cvtsi32_si128(2 * i32::from(code));
    let lo_filled = _mm256_or_si256(_mm256_srl_epi64(lo, shift), _mm256_set1_epi8(0xfcu8 as i8));
    let hi_filled = _mm256_and_si256(_mm256_srl_epi64(hi, shift), _mm256_set1_epi8(0x03));
    _mm256_sad_epu8(lo_filled, hi_filled)
}

#[inline]
#[target_feature(enable = "avx2")]
unsafe fn horizontal_sum(v: __m256i) -> u64 {
    let s = _mm_add_epi64(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
    (_mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1)) as u64
}

#[inline]
#[target_feature(enable = "avx2")]
unsafe fn all4_from_masked(masked: __m256i, prefix_len: usize) -> OccCounts {
    let (lo, hi) = lookup(masked);
    let a = extract(lo, hi, 0);
    let c = extract(lo, hi, 1);
    let g = extract(lo, hi, 2);
    let t = extract(lo, hi, 3);
    // [a0+a1, c0+c1, a2+a3, c2+c3] and the same for g, t
    let ac = _mm256_add_epi64(_mm256_unpacklo_epi64(a, c), _mm256_unpackhi_epi64(a, c));
    let gt = _mm256_add_epi64(_mm256_unpacklo_epi64(g, t), _mm256_unpackhi_epi64(g, t));
    let sums = _mm256_add_epi64(
        _mm256_permute2x128_si256(ac, gt, 0x20),
        _mm256_permute2x128_si256(ac, gt, 0x31),
    );
    let raw = _mm256_sub_epi64(_mm256_set1_epi64x(SAD_BASELINE as i64), sums);
    let mut out = [0u64; 4];
    _mm256_storeu_si256(out.as_mut_ptr().cast(), raw);
    out[0] -= (BUCKET_CHARS - prefix_len) as u64;
    OccCounts(out)
}

#[target_feature(enable = "avx2")]
pub(super) unsafe fn count(bucket: &[u8; BUCKET_BYTES], prefix_len: usize, symbol: Symbol) -> u32 {
    let (lo, hi) = lookup(masked_load(bucket, prefix_len));
    let raw = SAD_BASELINE - horizontal_sum(extract(lo, hi, symbol.code()));
    let padding = if symbol == Symbol::A {
        (BUCKET_CHARS - prefix_len) as u64
    } else {
        0
    };
    (raw - padding) as u32
}

#[target_feature(enable = "avx2")]
pub(super) unsafe fn count_all4(bucket: &[u8; BUCKET_BYTES], prefix_len: usize) -> OccCounts {
    all4_from_masked(masked_load(bucket, prefix_len), prefix_len)
}

/// Eight counters from a single load of the bucket.
#[target_feature(enable = "avx2")]
pub(super) unsafe fn count_pair(
    bucket: &[u8; BUCKET_BYTES],
    first: usize,
    second: usize,
) -> (OccCounts, OccCounts) {
    let data = _mm256_loadu_si256(bucket.as_ptr().cast());
    (
        all4_from_masked(mask(data, first), first),
        all4_from_masked(mask(data, second), second),
    )
}
