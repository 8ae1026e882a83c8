//! Burrows-Wheeler transform and the `C` table.

use alloc::vec::Vec;

use crate::alphabet::{BwtChar, Symbol};
use crate::error::BuildError;
use crate::suffix_array::SuffixArray;

/// `c[b]` counts reference characters smaller than symbol `b`; `c[4] == n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CTable(pub [u64; 5]);

impl CTable {
    /// Exclusive prefix sum of per-symbol totals.
    pub fn from_totals(totals: [u64; 4]) -> CTable {
        let mut c = [0u64; 5];
        for b in 0..4 {
            c[b + 1] = c[b] + totals[b];
        }
        CTable(c)
    }

    #[inline]
    pub fn get(&self, symbol: Symbol) -> u64 {
        self.0[symbol.index()]
    }

    /// `c[b + 1]`, the end of the block of rows starting with `b`.
    #[inline]
    pub fn next(&self, symbol: Symbol) -> u64 {
        self.0[symbol.index() + 1]
    }

    pub fn total(&self, symbol: Symbol) -> u64 {
        self.next(symbol) - self.get(symbol)
    }

    pub fn is_consistent(&self) -> bool {
        self.0[0] == 0 && self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

pub fn build_c_table(symbol_totals: [u64; 4]) -> CTable {
    CTable::from_totals(symbol_totals)
}

/// Returns the BWT of `reference$` and the row holding `$`.
///
/// `reference` is ASCII `ACGT`; `sa` must be its suffix array.
pub fn bwt_from_sa(reference: &[u8], sa: &SuffixArray) -> Result<(Vec<BwtChar>, usize), BuildError> {
    if sa.len() != reference.len() + 1 {
        return Err(BuildError::SaLength {
            expected: reference.len() + 1,
            found: sa.len(),
        });
    }
    let mut sentinel_row = 0;
    let mut bwt = Vec::with_capacity(sa.len());
    for (row, &pos) in sa.entries().iter().enumerate() {
        if pos == 0 {
            sentinel_row = row;
            bwt.push(BwtChar::Sentinel);
        } else {
            let byte = reference[pos - 1];
            let s = Symbol::from_ascii(byte).ok_or(BuildError::InvalidCharacter {
                offset: pos - 1,
                byte,
            })?;
            bwt.push(BwtChar::Symbol(s));
        }
    }
    Ok((bwt, sentinel_row))
}
