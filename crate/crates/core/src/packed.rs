//! 2-bit packed DNA, four characters per byte.
//!
//! Character `j` lives in bits `2*(j % 4)..2*(j % 4) + 2` of byte `j / 4`, so
//! the earliest character is in the low bits. Unused trailing fields are zero.

use alloc::vec::Vec;

use crate::alphabet::Symbol;
use crate::error::BuildError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedText {
    bytes: Vec<u8>,
    len: usize,
}

impl PackedText {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(chars: usize) -> Self {
        PackedText {
            bytes: Vec::with_capacity(chars.div_ceil(4)),
            len: 0,
        }
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Self {
        let iter = symbols.into_iter();
        let mut out = PackedText::with_capacity(iter.size_hint().0);
        for s in iter {
            out.push(s);
        }
        out
    }

    #[inline]
    pub fn push(&mut self, symbol: Symbol) {
        let shift = 2 * (self.len % 4);
        if shift == 0 {
            self.bytes.push(0);
        }
        let last = self.bytes.len() - 1;
        self.bytes[last] |= symbol.code() << shift;
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> Symbol {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        Symbol::from_code(self.bytes[i / 4] >> (2 * (i % 4)))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Decodes back to upper-case ASCII.
    pub fn to_ascii(&self) -> Vec<u8> {
        self.iter().map(Symbol::to_ascii).collect()
    }
}

/// Packs an ASCII `ACGT` string (either case).
pub fn pack_2bit(chars: &[u8]) -> Result<PackedText, BuildError> {
    let mut out = PackedText::with_capacity(chars.len());
    for (offset, &byte) in chars.iter().enumerate() {
        let s = Symbol::from_ascii(byte).ok_or(BuildError::InvalidCharacter { offset, byte })?;
        out.push(s);
    }
    Ok(out)
}

pub fn unpack_2bit(text: &PackedText) -> Vec<u8> {
    text.to_ascii()
}
