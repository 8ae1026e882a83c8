//! Suffix array of `R$`, where `$` sorts before every symbol.
//!
//! [`build_suffix_array`] uses SA-IS (induced sorting, linear time).
//! [`naive_suffix_array`] sorts all suffixes by direct comparison and is kept
//! as the reference the fast path is checked against.

use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::Symbol;
use crate::error::BuildError;

/// Suffix array over `R$`; `entries.len() == R.len() + 1` and `entries[0] == R.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixArray {
    entries: Vec<usize>,
}

impl SuffixArray {
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    /// Length of `R$`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl core::ops::Index<usize> for SuffixArray {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.entries[i]
    }
}

fn parse(reference: &[u8]) -> Result<Vec<Symbol>, BuildError> {
    if reference.is_empty() {
        return Err(BuildError::EmptyReference);
    }
    reference
        .iter()
        .enumerate()
        .map(|(offset, &byte)| {
            Symbol::from_ascii(byte).ok_or(BuildError::InvalidCharacter { offset, byte })
        })
        .collect()
}

/// Builds the suffix array of `reference$` for an ASCII `ACGT` reference.
pub fn build_suffix_array(reference: &[u8]) -> Result<SuffixArray, BuildError> {
    Ok(suffix_array_of_symbols(&parse(reference)?))
}

/// Comparison-sort construction; quadratic in the worst case.
pub fn naive_suffix_array(reference: &[u8]) -> Result<SuffixArray, BuildError> {
    let symbols = parse(reference)?;
    // `$` = 0, symbols shifted to 1..=4
    let mut text: Vec<u8> = symbols.iter().map(|s| s.code() + 1).collect();
    text.push(0);
    let mut entries: Vec<usize> = (0..text.len()).collect();
    entries.sort_unstable_by(|&a, &b| text[a..].cmp(&text[b..]));
    Ok(SuffixArray { entries })
}

pub(crate) fn suffix_array_of_symbols(symbols: &[Symbol]) -> SuffixArray {
    let mut text: Vec<u32> = symbols.iter().map(|s| u32::from(s.code()) + 1).collect();
    text.push(0);
    SuffixArray {
        entries: sais(&text, 5),
    }
}

const EMPTY: usize = usize::MAX;

/// SA-IS over `text`, which must end in a unique 0 and use symbols `< alphabet`.
fn sais(text: &[u32], alphabet: usize) -> Vec<usize> {
    let n = text.len();
    debug_assert!(n > 0 && text[n - 1] == 0);
    if n == 1 {
        return vec![0];
    }

    // true = S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = text[i] < text[i + 1] || (text[i] == text[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut bucket_sizes = vec![0usize; alphabet];
    for &c in text {
        bucket_sizes[c as usize] += 1;
    }
    let heads = |out: &mut Vec<usize>| {
        out.clear();
        let mut sum = 0;
        for &size in &bucket_sizes {
            out.push(sum);
            sum += size;
        }
    };
    let tails = |out: &mut Vec<usize>| {
        out.clear();
        let mut sum = 0;
        for &size in &bucket_sizes {
            sum += size;
            out.push(sum);
        }
    };

    let mut sa = vec![EMPTY; n];
    let mut bucket = Vec::with_capacity(alphabet);

    // Stage 1: approximate LMS placement, then induce to sort LMS substrings.
    tails(&mut bucket);
    #[allow(clippy::needless_range_loop)]
    for i in 1..n {
        if is_lms(i) {
            let c = text[i] as usize;
            bucket[c] -= 1;
            sa[bucket[c]] = i;
        }
    }
    induce(text, &stype, &mut sa, &mut bucket, &heads, &tails);

    // Compact sorted LMS positions into the front of `sa`.
    let mut lms_count = 0;
    for idx in 0..n {
        let p = sa[idx];
        if is_lms(p) {
            sa[lms_count] = p;
            lms_count += 1;
        }
    }

    // Name LMS substrings; names are stored at sa[lms_count + p / 2].
    for slot in sa[lms_count..].iter_mut() {
        *slot = EMPTY;
    }
    let mut name = 0usize;
    let mut prev = EMPTY;
    for idx in 0..lms_count {
        let p = sa[idx];
        if prev == EMPTY || !lms_substrings_equal(text, &stype, prev, p) {
            name += 1;
        }
        prev = p;
        sa[lms_count + p / 2] = name - 1;
    }

    let mut reduced = Vec::with_capacity(lms_count);
    let mut lms_positions = Vec::with_capacity(lms_count);
    for i in 1..n {
        if is_lms(i) {
            lms_positions.push(i);
            reduced.push(sa[lms_count + i / 2] as u32);
        }
    }

    let reduced_sa = if name < lms_count {
        sais(&reduced, name)
    } else {
        let mut direct = vec![0usize; lms_count];
        for (i, &r) in reduced.iter().enumerate() {
            direct[r as usize] = i;
        }
        direct
    };

    // Stage 2: place LMS suffixes in their true order and induce again.
    for slot in sa.iter_mut() {
        *slot = EMPTY;
    }
    tails(&mut bucket);
    for &r in reduced_sa.iter().rev() {
        let p = lms_positions[r];
        let c = text[p] as usize;
        bucket[c] -= 1;
        sa[bucket[c]] = p;
    }
    induce(text, &stype, &mut sa, &mut bucket, &heads, &tails);
    sa
}

fn induce(
    text: &[u32],
    stype: &[bool],
    sa: &mut [usize],
    bucket: &mut Vec<usize>,
    heads: &impl Fn(&mut Vec<usize>),
    tails: &impl Fn(&mut Vec<usize>),
) {
    let n = text.len();
    heads(bucket);
    for idx in 0..n {
        let p = sa[idx];
        if p != EMPTY && p > 0 && !stype[p - 1] {
            let c = text[p - 1] as usize;
            sa[bucket[c]] = p - 1;
            bucket[c] += 1;
        }
    }
    tails(bucket);
    for idx in (0..n).rev() {
        let p = sa[idx];
        if p != EMPTY && p > 0 && stype[p - 1] {
            let c = text[p - 1] as usize;
            bucket[c] -= 1;
            sa[bucket[c]] = p - 1;
        }
    }
}

fn lms_substrings_equal(text: &[u32], stype: &[bool], a: usize, b: usize) -> bool {
    let n = text.len();
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];
    for d in 0.. {
        let (x, y) = (a + d, b + d);
        if x >= n || y >= n {
            return false;
        }
        if text[x] != text[y] || stype[x] != stype[y] {
            return false;
        }
        if d > 0 {
            match (is_lms(x), is_lms(y)) {
                (true, true) => return true,
                (false, false) => {}
                _ => return false,
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(build_suffix_array(b"ACAG").unwrap().entries(), &[4, 0, 2, 1, 3]);
        assert_eq!(build_suffix_array(b"A").unwrap().entries(), &[1, 0]);
        assert_eq!(build_suffix_array(b"AAAA").unwrap().entries(), &[4, 3, 2, 1, 0]);
    }

    #[test]
    fn errors() {
        assert_eq!(build_suffix_array(b""), Err(BuildError::EmptyReference));
        assert_eq!(
            build_suffix_array(b"ACXG"),
            Err(BuildError::InvalidCharacter { offset: 2, byte: b'X' })
        );
    }

    #[test]
    fn repetitive_inputs_match_naive() {
        for s in ["ACACACACACAC", "AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAT", "TTTTTTTTT", "GATTACA"] {
            assert_eq!(
                build_suffix_array(s.as_bytes()).unwrap(),
                naive_suffix_array(s.as_bytes()).unwrap(),
                "{s}"
            );
        }
    }

    fn assert_valid(text: &[u8], sa: &SuffixArray) {
        let n = text.len();
        let mut seen = vec![false; n + 1];
        for &e in sa.entries() {
            assert!(!seen[e]);
            seen[e] = true;
        }
        let mut t: Vec<u8> = text.iter().map(|&b| Symbol::from_ascii(b).unwrap().code() + 1).collect();
        t.push(0);
        for w in sa.entries().windows(2) {
            assert!(t[w[0]..] < t[w[1]..]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_naive_sort(s in "[ACGT]{1,2000}") {
            let fast = build_suffix_array(s.as_bytes()).unwrap();
            prop_assert_eq!(&fast, &naive_suffix_array(s.as_bytes()).unwrap());
            assert_valid(s.as_bytes(), &fast);
        }

        #[test]
        fn low_entropy_matches_naive(s in "[AC]{1,300}") {
            prop_assert_eq!(
                build_suffix_array(s.as_bytes()).unwrap(),
                naive_suffix_array(s.as_bytes()).unwrap()
            );
        }
    }
}
