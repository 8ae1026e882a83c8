//! Index files, FASTA input, the kernel benchmark and the `fmpm` command line
//! on top of `fmpm-core`.

pub mod bench;
pub mod cli;
pub mod fasta;
pub mod format;
