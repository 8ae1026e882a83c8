//! In-bucket occurrence counting.
//!
//! A bucket stores 128 BWT characters in 32 packed bytes. Every kernel answers
//! the same question: how often does a symbol occur among the first
//! `prefix_len` characters of the bucket. Kernels are pure functions and know
//! nothing about the `$` sentinel; the index applies that correction.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::alphabet::Symbol;

#[cfg(target_arch = "x86_64")]
mod avx2;
pub mod nibble;
pub mod scalar;

pub use nibble::{
    count_bucket_all4_nibble, count_bucket_nibble, count_bucket_nibble_traced, LaneTrace,
    NibbleTables, NibbleTrace,
};
pub use scalar::{count_bucket_all4_scalar, count_bucket_scalar};

pub const BUCKET_CHARS: usize = 128;
pub const BUCKET_BYTES: usize = BUCKET_CHARS / 4;

/// Occurrence counters for `A`, `C`, `G`, `T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OccCounts(pub [u64; 4]);

impl OccCounts {
    #[inline]
    pub fn get(&self, symbol: Symbol) -> u64 {
        self.0[symbol.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl core::ops::Add for OccCounts {
    type Output = OccCounts;

    fn add(self, rhs: OccCounts) -> OccCounts {
        OccCounts(core::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

/// The eight counters one inexact-search step consumes: at `k - 1` and at `l`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OccPair {
    pub at_km1: OccCounts,
    pub at_l: OccCounts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Imp {
    Scalar,
    Nibble,
    #[cfg(target_arch = "x86_64")]
    Avx2,
}

/// A resolved counting kernel.
///
/// The AVX2 variant can only be obtained through [`Kernel::avx2`] or
/// [`KernelChoice::resolve`], both of which check CPU support first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Kernel(Imp);

impl Kernel {
    pub const SCALAR: Kernel = Kernel(Imp::Scalar);
    pub const NIBBLE: Kernel = Kernel(Imp::Nibble);

    pub fn avx2() -> Option<Kernel> {
        #[cfg(target_arch = "x86_64")]
        if avx2_detected() {
            return Some(Kernel(Imp::Avx2));
        }
        None
    }

    /// Every kernel usable on this machine.
    pub fn available() -> Vec<Kernel> {
        let mut out = alloc::vec![Kernel::SCALAR, Kernel::NIBBLE];
        out.extend(Kernel::avx2());
        out
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            Imp::Scalar => "scalar",
            Imp::Nibble => "nibble",
            #[cfg(target_arch = "x86_64")]
            Imp::Avx2 => "avx2",
        }
    }

    #[inline]
    pub fn count(self, bucket: &[u8; BUCKET_BYTES], prefix_len: usize, symbol: Symbol) -> u32 {
        match self.0 {
            Imp::Scalar => count_bucket_scalar(bucket, prefix_len, symbol),
            Imp::Nibble => count_bucket_nibble(bucket, prefix_len, symbol),
            #[cfg(target_arch = "x86_64")]
            Imp::Avx2 => {
                assert!(prefix_len <= BUCKET_CHARS, "prefix_len {prefix_len} > 128");
                // SAFETY: Imp::Avx2 is only constructed after detecting AVX2.
                unsafe { avx2::count(bucket, prefix_len, symbol) }
            }
        }
    }

    #[inline]
    pub fn count_all4(self, bucket: &[u8; BUCKET_BYTES], prefix_len: usize) -> OccCounts {
        match self.0 {
            Imp::Scalar => count_bucket_all4_scalar(bucket, prefix_len),
            Imp::Nibble => count_bucket_all4_nibble(bucket, prefix_len),
            #[cfg(target_arch = "x86_64")]
            Imp::Avx2 => {
                assert!(prefix_len <= BUCKET_CHARS, "prefix_len {prefix_len} > 128");
                // SAFETY: see `count`.
                unsafe { avx2::count_all4(bucket, prefix_len) }
            }
        }
    }

    /// Counters for two prefix lengths of the same bucket.
    #[inline]
    pub fn count_pair(
        self,
        bucket: &[u8; BUCKET_BYTES],
        first: usize,
        second: usize,
    ) -> (OccCounts, OccCounts) {
        match self.0 {
            #[cfg(target_arch = "x86_64")]
            Imp::Avx2 => {
                assert!(first <= BUCKET_CHARS && second <= BUCKET_CHARS);
                // SAFETY: see `count`.
                unsafe { avx2::count_pair(bucket, first, second) }
            }
            _ => (self.count_all4(bucket, first), self.count_all4(bucket, second)),
        }
    }
}

impl Default for Kernel {
    fn default() -> Self {
        KernelChoice::Auto.resolve()
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({})", self.name())
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(target_arch = "x86_64")]
fn avx2_detected() -> bool {
    #[cfg(any(feature = "std", test))]
    {
        std::is_x86_feature_detected!("avx2")
    }
    #[cfg(not(any(feature = "std", test)))]
    {
        cfg!(target_feature = "avx2")
    }
}

/// User-facing kernel selector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum KernelChoice {
    Scalar,
    Nibble,
    /// Hardware path when available, otherwise the portable nibble kernel.
    #[default]
    Auto,
}

impl KernelChoice {
    pub fn resolve(self) -> Kernel {
        match self {
            KernelChoice::Scalar => Kernel::SCALAR,
            KernelChoice::Nibble => Kernel::NIBBLE,
            KernelChoice::Auto => Kernel::avx2().unwrap_or(Kernel::NIBBLE),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelChoice::Scalar => "scalar",
            KernelChoice::Nibble => "nibble",
            KernelChoice::Auto => "auto",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownKernel;

impl fmt::Display for UnknownKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown kernel (expected scalar, nibble or auto)")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for UnknownKernel {}

impl FromStr for KernelChoice {
    type Err = UnknownKernel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scalar" => Ok(KernelChoice::Scalar),
            "nibble" => Ok(KernelChoice::Nibble),
            "auto" => Ok(KernelChoice::Auto),
            _ => Err(UnknownKernel),
        }
    }
}

impl fmt::Display for KernelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
