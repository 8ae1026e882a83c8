use std::collections::BTreeSet;

use fmpm_core::{build_index, FmIndex, PsiStep, Record, Symbol};
use proptest::prelude::*;

fn dna(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..=max)
}

fn index_of(text: &[u8]) -> FmIndex {
    build_index(text, vec![Record::new("r", 0, text.len() as u64)]).unwrap()
}

fn sorted_suffixes(text: &[u8]) -> Vec<usize> {
    // `$` sorts first, which `[]` < any non-empty slice gives for free.
    let mut sa: Vec<usize> = (0..=text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

fn positions(index: &FmIndex, pattern: &[u8], z: usize) -> BTreeSet<u64> {
    index.find(pattern, z, None).hits.iter().map(|h| h.global_pos).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_matches_sliding_window(text in dna(400), pattern in dna(8)) {
        let idx = index_of(&text);
        let expected: BTreeSet<u64> = text
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == &pattern[..])
            .map(|(i, _)| i as u64)
            .collect();
        prop_assert_eq!(idx.exact_search(&pattern).interval.width(), expected.len());
        prop_assert_eq!(positions(&idx, &pattern, 0), expected);
    }

    #[test]
    fn larger_budget_finds_superset(text in dna(300), pattern in dna(8)) {
        let idx = index_of(&text);
        let mut prev = positions(&idx, &pattern, 0);
        for z in 1..=2 {
            let cur = positions(&idx, &pattern, z);
            prop_assert!(prev.is_subset(&cur), "z={} lost hits", z);
            prev = cur;
        }
    }

    #[test]
    fn psi_inverse_steps_back_one_position(text in dna(600)) {
        let idx = index_of(&text);
        let sa = sorted_suffixes(&text);
        for (row, &pos) in sa.iter().enumerate() {
            prop_assert_eq!(idx.locate_row(row), pos as u64);
            match idx.psi_inverse(row) {
                PsiStep::Sentinel => prop_assert_eq!(pos, 0),
                PsiStep::Row { symbol, row: next } => {
                    prop_assert_eq!(sa[next], pos - 1);
                    prop_assert_eq!(Some(symbol), Symbol::from_ascii(text[pos - 1]));
                }
            }
            prop_assert_eq!(idx.psi_inverse_fused(row), idx.psi_inverse(row));
        }
    }

    #[test]
    fn occ_is_monotone_with_unit_steps(text in dna(700)) {
        let idx = index_of(&text);
        for s in Symbol::ALL {
            let mut prev = 0;
            for k in 0..=text.len() {
                let cur = idx.occ(s, k as isize);
                prop_assert!(cur == prev || cur == prev + 1);
                prev = cur;
            }
            prop_assert_eq!(prev, text.iter().filter(|&&c| c == s.to_ascii()).count() as u64);
        }
    }
}
