use core::fmt;

/// Failures while constructing an index from a reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    EmptyReference,
    /// A byte outside `ACGTacgt` at the given 0-based offset.
    InvalidCharacter { offset: usize, byte: u8 },
    /// Suffix array length does not match the reference.
    SaLength { expected: usize, found: usize },
    /// Records must tile the reference contiguously from offset 0.
    RecordLayout,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::EmptyReference => write!(f, "reference is empty"),
            BuildError::InvalidCharacter { offset, byte } => {
                write!(f, "invalid character {:?} at offset {offset}", *byte as char)
            }
            BuildError::SaLength { expected, found } => {
                write!(f, "suffix array has {found} entries, expected {expected}")
            }
            BuildError::RecordLayout => {
                write!(f, "records do not tile the reference contiguously")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BuildError {}

/// Structural inconsistency found when assembling an index from raw parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexError {
    BucketCount { expected: usize, found: usize },
    SampleCount { expected: usize, found: usize },
    SentinelRow { row: u64, n: u64 },
    CTable,
    RecordLayout,
    /// Bucket bases do not telescope over the stored characters.
    BucketBase { bucket: usize },
    /// Padding past the last BWT position is not zero.
    Padding,
}

impl fmt::Display for IndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexError::BucketCount { expected, found } => {
                write!(f, "bucket count {found}, expected {expected}")
            }
            IndexError::SampleCount { expected, found } => {
                write!(f, "suffix array sample count {found}, expected {expected}")
            }
            IndexError::SentinelRow { row, n } => {
                write!(f, "sentinel row {row} out of range for n = {n}")
            }
            IndexError::CTable => write!(f, "C table is inconsistent with the BWT"),
            IndexError::RecordLayout => write!(f, "record table does not tile the reference"),
            IndexError::BucketBase { bucket } => {
                write!(f, "bucket {bucket} base counters are inconsistent")
            }
            IndexError::Padding => write!(f, "non-zero padding in the final bucket"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IndexError {}
