//! FM-index over the DNA alphabet with bucketed 2-bit BWT storage.
//!
//! The index interleaves four 64-bit occurrence counters with 128 packed BWT
//! characters per bucket and keeps every 32nd suffix array entry. Occurrence
//! counts inside a bucket are computed on the fly by one of three kernels:
//!
//! * a per-character scalar loop, used as the ground truth;
//! * a portable nibble-lookup kernel that emulates 64-bit SIMD lanes with
//!   ordinary integer arithmetic;
//! * an AVX2 version of the same nibble-lookup pipeline (x86_64 only).
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `std` feature to
//! let [`KernelChoice::Auto`] detect AVX2 at runtime instead of at compile time.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod alphabet;
pub mod bwt;
mod error;
pub mod index;
pub mod kernel;
pub mod packed;
pub mod search;
pub mod suffix_array;

pub use alphabet::{BwtChar, Symbol};
pub use bwt::{bwt_from_sa, CTable};
pub use error::{BuildError, IndexError};
pub use index::{build_index, FmIndex, FmIndexParts, OccBucket, Record, BUCKET_CHARS, SA_STRIDE};
pub use kernel::{Kernel, KernelChoice, NibbleTables, OccCounts, OccPair};
pub use packed::PackedText;
pub use search::{BwmInterval, ExactMatch, Hit, Hits, MatchResult, PsiStep};
pub use suffix_array::{build_suffix_array, SuffixArray};
