//! Portable nibble-lookup occurrence kernel.
//!
//! The bucket is processed as four 64-bit lanes of eight bytes each, mirroring
//! the 256-bit register layout of the AVX2 path:
//!
//! 1. characters at positions `>= prefix_len` are masked to code 0 (`A`);
//! 2. every byte is split into nibbles and each nibble is mapped through a
//!    16-entry table to a byte holding four 2-bit per-symbol counts; the low
//!    nibble table is stored complemented;
//! 3. both looked-up lanes are shifted right by `2 * code` so the wanted
//!    counter sits in bits 0..2, then the upper six bits are filled with ones
//!    (low side) or zeros (high side);
//! 4. the sum of absolute byte differences of each lane is
//!    `2040 - sum(lo_count + hi_count)`;
//! 5. the four lane sums add up to `8160 - raw_count`.
//!
//! Masked padding shows up as extra `A`s and is subtracted at the end.

use super::{OccCounts, BUCKET_BYTES};
use crate::alphabet::Symbol;

const LOW_NIBBLES: u64 = 0x0f0f_0f0f_0f0f_0f0f;
const FILL_ONES: u64 = 0xfcfc_fcfc_fcfc_fcfc;
const LOW_TWO_BITS: u64 = 0x0303_0303_0303_0303;

/// Sum of the SAD values of four lanes when every counter is zero.
pub const SAD_BASELINE: u64 = 8160;
/// SAD value of one eight-byte lane when every counter is zero.
pub const LANE_BASELINE: u64 = 2040;

/// Per-nibble packed symbol counts; symbol `s` occupies bits `2s..2s+2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NibbleTables {
    /// Complemented counts for the low nibble of each byte.
    pub lo: [u8; 16],
    /// Counts for the high nibble of each byte.
    pub hi: [u8; 16],
}

const fn packed_counts(nibble: u8) -> u8 {
    let first = nibble & 3;
    let second = (nibble >> 2) & 3;
    (1u8 << (2 * first)) + (1u8 << (2 * second))
}

impl NibbleTables {
    pub const fn new() -> NibbleTables {
        let mut lo = [0u8; 16];
        let mut hi = [0u8; 16];
        let mut v = 0;
        while v < 16 {
            hi[v] = packed_counts(v as u8);
            lo[v] = !packed_counts(v as u8);
            v += 1;
        }
        NibbleTables { lo, hi }
    }
}

impl Default for NibbleTables {
    fn default() -> Self {
        TABLES
    }
}

pub const TABLES: NibbleTables = NibbleTables::new();

/// Splits a packed counter byte into its four 2-bit fields.
pub fn decode_counts(packed: u8) -> [u8; 4] {
    [packed & 3, (packed >> 2) & 3, (packed >> 4) & 3, (packed >> 6) & 3]
}

/// Intermediate values of one 64-bit lane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LaneTrace {
    pub input: u64,
    pub masked: u64,
    pub lo_nibbles: u64,
    pub hi_nibbles: u64,
    pub lo_lookup: u64,
    pub hi_lookup: u64,
    pub lo_shifted: u64,
    pub hi_shifted: u64,
    pub lo_filled: u64,
    pub hi_filled: u64,
    pub sad: u64,
}

/// Full record of one single-symbol count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NibbleTrace {
    pub lanes: [LaneTrace; 4],
    /// Sum of the four lane SADs, `8160 - raw_count`.
    pub aggregate: u64,
    /// Count including masked padding.
    pub raw_count: u64,
    pub count: u32,
}

/// Receives intermediate values; the `()` sink compiles to nothing.
pub trait TraceSink {
    fn lane(&mut self, index: usize, lane: &LaneTrace);
    fn finish(&mut self, aggregate: u64, raw_count: u64, count: u32);
}

impl TraceSink for () {
    #[inline(always)]
    fn lane(&mut self, _: usize, _: &LaneTrace) {}
    #[inline(always)]
    fn finish(&mut self, _: u64, _: u64, _: u32) {}
}

impl TraceSink for NibbleTrace {
    fn lane(&mut self, index: usize, lane: &LaneTrace) {
        self.lanes[index] = *lane;
    }

    fn finish(&mut self, aggregate: u64, raw_count: u64, count: u32) {
        self.aggregate = aggregate;
        self.raw_count = raw_count;
        self.count = count;
    }
}

#[inline(always)]
pub(crate) fn lane_mask(lane: usize, prefix_len: usize) -> u64 {
    let keep = prefix_len.saturating_sub(32 * lane).min(32);
    if keep == 32 {
        !0
    } else {
        (1u64 << (2 * keep)) - 1
    }
}

#[inline(always)]
fn load_lane(bucket: &[u8; BUCKET_BYTES], lane: usize) -> u64 {
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&bucket[8 * lane..8 * lane + 8]);
    u64::from_le_bytes(bytes)
}

#[inline(always)]
fn lookup(nibbles: u64, table: &[u8; 16]) -> u64 {
    let mut out = 0u64;
    for b in 0..8 {
        let v = ((nibbles >> (8 * b)) & 0xf) as usize;
        out |= u64::from(table[v]) << (8 * b);
    }
    out
}

/// Horizontal sum of the eight bytes of `x`.
#[inline(always)]
fn byte_sum(x: u64) -> u64 {
    let pairs = (x & 0x00ff_00ff_00ff_00ff) + ((x >> 8) & 0x00ff_00ff_00ff_00ff);
    pairs.wrapping_mul(0x0001_0001_0001_0001) >> 48
}

/// Sum of absolute differences of the bytes of `a` and `b`.
pub fn sad_u8x8(a: u64, b: u64) -> u64 {
    (0..8)
        .map(|i| {
            let x = (a >> (8 * i)) as u8;
            let y = (b >> (8 * i)) as u8;
            u64::from(x.abs_diff(y))
        })
        .sum()
}

/// After filling, low-side bytes are >= 252 and high-side bytes <= 3, so the
/// lane SAD equals the difference of the two byte sums.
#[inline(always)]
fn filled_sad(lo_filled: u64, hi_filled: u64) -> u64 {
    byte_sum(lo_filled) - byte_sum(hi_filled)
}

#[inline(always)]
fn split_and_lookup(masked: u64) -> (u64, u64, u64, u64) {
    let lo_nibbles = masked & LOW_NIBBLES;
    let hi_nibbles = (masked >> 4) & LOW_NIBBLES;
    (
        lo_nibbles,
        hi_nibbles,
        lookup(lo_nibbles, &TABLES.lo),
        lookup(hi_nibbles, &TABLES.hi),
    )
}

#[inline(always)]
fn finalize(aggregate: u64, prefix_len: usize, symbol: Symbol) -> (u64, u32) {
    let raw = SAD_BASELINE - aggregate;
    let padding = if symbol == Symbol::A {
        (super::BUCKET_CHARS - prefix_len) as u64
    } else {
        0
    };
    (raw, (raw - padding) as u32)
}

#[inline(always)]
fn count_with<S: TraceSink>(
    bucket: &[u8; BUCKET_BYTES],
    prefix_len: usize,
    symbol: Symbol,
    sink: &mut S,
) -> u32 {
    assert!(prefix_len <= super::BUCKET_CHARS, "prefix_len {prefix_len} > 128");
    let shift = 2 * u32::from(symbol.code());
    let mut aggregate = 0;
    for lane in 0..4 {
        let input = load_lane(bucket, lane);
        let masked = input & lane_mask(lane, prefix_len);
        let (lo_nibbles, hi_nibbles, lo_lookup, hi_lookup) = split_and_lookup(masked);
        let lo_shifted = lo_lookup >> shift;
        let hi_shifted = hi_lookup >> shift;
        let lo_filled = lo_shifted | FILL_ONES;
        let hi_filled = hi_shifted & LOW_TWO_BITS;
        let sad = filled_sad(lo_filled, hi_filled);
        sink.lane(
            lane,
            &LaneTrace {
                input,
                masked,
                lo_nibbles,
                hi_nibbles,
                lo_lookup,
                hi_lookup,
                lo_shifted,
                hi_shifted,
                lo_filled,
                hi_filled,
                sad,
            },
        );
        aggregate += sad;
    }
    let (raw, count) = finalize(aggregate, prefix_len, symbol);
    sink.finish(aggregate, raw, count);
    count
}

pub fn count_bucket_nibble(bucket: &[u8; BUCKET_BYTES], prefix_len: usize, symbol: Symbol) -> u32 {
    count_with(bucket, prefix_len, symbol, &mut ())
}

/// Same as [`count_bucket_nibble`] but records every intermediate lane value.
pub fn count_bucket_nibble_traced(
    bucket: &[u8; BUCKET_BYTES],
    prefix_len: usize,
    symbol: Symbol,
) -> NibbleTrace {
    let mut trace = NibbleTrace::default();
    count_with(bucket, prefix_len, symbol, &mut trace);
    trace
}

/// All four counters from one lookup pass; the four extractions are independent.
pub fn count_bucket_all4_nibble(bucket: &[u8; BUCKET_BYTES], prefix_len: usize) -> OccCounts {
    assert!(prefix_len <= super::BUCKET_CHARS, "prefix_len {prefix_len} > 128");
    let mut aggregate = [0u64; 4];
    for lane in 0..4 {
        let masked = load_lane(bucket, lane) & lane_mask(lane, prefix_len);
        let (_, _, lo_lookup, hi_lookup) = split_and_lookup(masked);
        for (code, acc) in aggregate.iter_mut().enumerate() {
            let shift = 2 * code as u32;
            *acc += filled_sad((lo_lookup >> shift) | FILL_ONES, (hi_lookup >> shift) & LOW_TWO_BITS);
        }
    }
    let mut counts = [0u64; 4];
    for (code, c) in counts.iter_mut().enumerate() {
        *c = u64::from(finalize(aggregate[code], prefix_len, Symbol::from_code(code as u8)).1);
    }
    OccCounts(counts)
}
