//! Backward search and position recovery.
//!
//! Intervals are inclusive row ranges `[k, l]` of the Burrows-Wheeler matrix.
//! Row 0 is the `$` suffix, so the rows starting with symbol `b` are
//! `[C[b] + 1, C[b + 1]]` and one backward step with `b` maps `[k, l]` to
//! `[C[b] + Occ(b, k - 1) + 1, C[b] + Occ(b, l)]`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::alphabet::{BwtChar, Symbol};
use crate::index::{FmIndex, SA_STRIDE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BwmInterval {
    pub k: usize,
    pub l: usize,
}

impl BwmInterval {
    pub const fn new(k: usize, l: usize) -> Self {
        BwmInterval { k, l }
    }

    pub const fn is_empty(&self) -> bool {
        self.k > self.l
    }

    /// Number of rows, i.e. occurrences.
    pub const fn width(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.l - self.k + 1
        }
    }

    pub fn rows(&self) -> core::ops::RangeInclusive<usize> {
        self.k..=self.l
    }
}

/// Result of [`FmIndex::exact_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactMatch {
    pub interval: BwmInterval,
    /// The pattern was empty or had a character outside `ACGT`; the interval
    /// is empty.
    pub degenerate: bool,
}

/// One distinct interval reached by the inexact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub interval: BwmInterval,
    pub diffs_used: usize,
    /// Reference characters spelled by the interval (pattern length plus
    /// insertions minus skipped pattern characters).
    pub span: usize,
}

/// A located occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    /// Index into [`FmIndex::records`].
    pub record: usize,
    pub offset: u64,
    pub global_pos: u64,
    pub diffs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hits {
    pub hits: Vec<Hit>,
    /// More hits existed than the requested cap.
    pub truncated: bool,
}

/// Outcome of one `Ψ⁻¹` step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiStep {
    /// The row holds `$`: its suffix array value is 0.
    Sentinel,
    Row { symbol: Symbol, row: usize },
}

pub fn is_degenerate(pattern: &[u8]) -> bool {
    pattern.is_empty() || pattern.iter().any(|&b| Symbol::from_ascii(b).is_none())
}

fn parse_pattern(pattern: &[u8]) -> Option<Vec<Symbol>> {
    if pattern.is_empty() {
        return None;
    }
    pattern.iter().map(|&b| Symbol::from_ascii(b)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    remaining: usize,
    budget: usize,
    k: usize,
    l: usize,
    span: usize,
}

impl FmIndex {
    /// Every row: `[0, n]`.
    pub fn full_interval(&self) -> BwmInterval {
        BwmInterval::new(0, self.len())
    }

    pub fn init_interval(&self, symbol: Symbol) -> BwmInterval {
        let c = self.c_table();
        BwmInterval::new(c.get(symbol) as usize + 1, c.next(symbol) as usize)
    }

    pub fn extend_backward(&self, interval: BwmInterval, symbol: Symbol) -> BwmInterval {
        self.extend_all(interval)[symbol.index()]
    }

    /// Extends by all four symbols from a single eight-counter fetch.
    pub fn extend_all(&self, interval: BwmInterval) -> [BwmInterval; 4] {
        if interval.is_empty() {
            return [BwmInterval::new(1, 0); 4];
        }
        let pair = self.occ_pair_all(interval.k as isize - 1, interval.l);
        let c = self.c_table();
        core::array::from_fn(|b| {
            let base = c.0[b];
            BwmInterval::new(
                (base + pair.at_km1.0[b]) as usize + 1,
                (base + pair.at_l.0[b]) as usize,
            )
        })
    }

    pub fn exact_search(&self, pattern: &[u8]) -> ExactMatch {
        let Some(symbols) = parse_pattern(pattern) else {
            return ExactMatch {
                interval: BwmInterval::new(1, 0),
                degenerate: true,
            };
        };
        let (&last, rest) = symbols.split_last().expect("non-empty pattern");
        let mut interval = self.init_interval(last);
        for &s in rest.iter().rev() {
            if interval.is_empty() {
                break;
            }
            interval = self.extend_backward(interval, s);
        }
        ExactMatch {
            interval,
            degenerate: false,
        }
    }

    /// Bounded-difference backward search allowing up to `max_diffs`
    /// mismatches, inserted reference characters, and skipped pattern
    /// characters, each costing one.
    ///
    /// Results are distinct non-empty intervals with the smallest
    /// `(diffs_used, span)` that reached them, sorted by interval.
    pub fn inexact_search(&self, pattern: &[u8], max_diffs: usize) -> Vec<MatchResult> {
        let Some(symbols) = parse_pattern(pattern) else {
            return Vec::new();
        };
        let full = self.full_interval();
        let mut stack = Vec::new();
        let mut seen = BTreeSet::new();
        let mut found: BTreeMap<BwmInterval, (usize, usize)> = BTreeMap::new();
        let mut push = |stack: &mut Vec<State>, s: State| {
            if seen.insert(s) {
                stack.push(s);
            }
        };
        push(
            &mut stack,
            State {
                remaining: symbols.len(),
                budget: max_diffs,
                k: full.k,
                l: full.l,
                span: 0,
            },
        );

        while let Some(st) = stack.pop() {
            if st.remaining == 0 {
                let key = (max_diffs - st.budget, st.span);
                found
                    .entry(BwmInterval::new(st.k, st.l))
                    .and_modify(|best| *best = (*best).min(key))
                    .or_insert(key);
                continue;
            }
            // Skip a pattern character.
            if st.budget > 0 {
                push(
                    &mut stack,
                    State {
                        remaining: st.remaining - 1,
                        budget: st.budget - 1,
                        ..st
                    },
                );
            }
            let want = symbols[st.remaining - 1];
            // Each branch derives from the entering interval.
            let next = self.extend_all(BwmInterval::new(st.k, st.l));
            for (b, iv) in Symbol::ALL.iter().zip(next) {
                if iv.is_empty() {
                    continue;
                }
                let moved = State {
                    k: iv.k,
                    l: iv.l,
                    span: st.span + 1,
                    ..st
                };
                // Extra reference character.
                if st.budget > 0 {
                    push(
                        &mut stack,
                        State {
                            budget: st.budget - 1,
                            ..moved
                        },
                    );
                }
                if *b == want {
                    push(
                        &mut stack,
                        State {
                            remaining: st.remaining - 1,
                            ..moved
                        },
                    );
                } else if st.budget > 0 {
                    push(
                        &mut stack,
                        State {
                            remaining: st.remaining - 1,
                            budget: st.budget - 1,
                            ..moved
                        },
                    );
                }
            }
        }

        found
            .into_iter()
            .filter(|(iv, _)| !iv.is_empty())
            .map(|(interval, (diffs_used, span))| MatchResult {
                interval,
                diffs_used,
                span,
            })
            .collect()
    }

    /// `C[BWT[i]] + Occ(BWT[i], i)`, i.e. the row whose suffix starts one
    /// position earlier.
    pub fn psi_inverse(&self, row: usize) -> PsiStep {
        match self.bwt_char_at(row) {
            BwtChar::Sentinel => PsiStep::Sentinel,
            BwtChar::Symbol(symbol) => PsiStep::Row {
                symbol,
                row: (self.c_table().get(symbol) + self.occ(symbol, row as isize)) as usize,
            },
        }
    }

    /// [`psi_inverse`](Self::psi_inverse) with the character decode and count
    /// served from one bucket access.
    #[inline]
    pub fn psi_inverse_fused(&self, row: usize) -> PsiStep {
        assert!(row <= self.len(), "row {row} out of range");
        match self.char_and_occ(row) {
            None => PsiStep::Sentinel,
            Some((symbol, occ)) => PsiStep::Row {
                symbol,
                row: (self.c_table().get(symbol) + occ) as usize,
            },
        }
    }

    /// Suffix array value of `row`, walking `Ψ⁻¹` to the nearest sampled row.
    pub fn locate_row(&self, mut row: usize) -> u64 {
        let mut steps = 0u64;
        loop {
            if row.is_multiple_of(SA_STRIDE) {
                return self.sa_samples()[row / SA_STRIDE] + steps;
            }
            match self.psi_inverse_fused(row) {
                PsiStep::Sentinel => return steps,
                PsiStep::Row { row: next, .. } => row = next,
            }
            steps += 1;
        }
    }

    /// Positions of every row in `interval`, dropping hits that fall outside
    /// a single record. Sorted by global position.
    pub fn locate_all(&self, interval: BwmInterval, diffs: usize, span: usize) -> Vec<Hit> {
        let mut hits: Vec<Hit> = interval
            .rows()
            .filter_map(|row| self.hit_at(self.locate_row(row), diffs, span))
            .collect();
        hits.sort_unstable_by_key(|h| h.global_pos);
        hits
    }

    fn hit_at(&self, global_pos: u64, diffs: usize, span: usize) -> Option<Hit> {
        let (record, offset) = self.record_at(global_pos)?;
        (global_pos + span as u64 <= self.records()[record].end()).then_some(Hit {
            record,
            offset,
            global_pos,
            diffs,
        })
    }

    /// Locates a set of inexact results, collapsing positions reached more
    /// than once to the smallest diff count. `max_hits` caps the output.
    pub fn locate_matches(&self, results: &[MatchResult], max_hits: Option<usize>) -> Hits {
        let mut best: BTreeMap<u64, Hit> = BTreeMap::new();
        for m in results {
            for hit in self.locate_all(m.interval, m.diffs_used, m.span) {
                best.entry(hit.global_pos)
                    .and_modify(|h| h.diffs = h.diffs.min(hit.diffs))
                    .or_insert(hit);
            }
        }
        let mut hits: Vec<Hit> = best.into_values().collect();
        let truncated = max_hits.is_some_and(|cap| hits.len() > cap);
        if let Some(cap) = max_hits {
            hits.truncate(cap);
        }
        Hits { hits, truncated }
    }

    /// Exact search followed by location.
    pub fn find_exact(&self, pattern: &[u8], max_hits: Option<usize>) -> Hits {
        let m = self.exact_search(pattern);
        if m.interval.is_empty() {
            return Hits::default();
        }
        let result = MatchResult {
            interval: m.interval,
            diffs_used: 0,
            span: pattern.len(),
        };
        self.locate_matches(&[result], max_hits)
    }

    /// Inexact search followed by location; `max_diffs == 0` is exact search.
    pub fn find(&self, pattern: &[u8], max_diffs: usize, max_hits: Option<usize>) -> Hits {
        if max_diffs == 0 {
            return self.find_exact(pattern, max_hits);
        }
        self.locate_matches(&self.inexact_search(pattern, max_diffs), max_hits)
    }
}
