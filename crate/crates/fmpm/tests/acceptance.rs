//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Every expected value is either a fixed golden value from the worked
//! examples or computed by an oracle in this file (naive suffix sort, BWT
//! prefix scans, sliding-window search, edit-distance DP, Hamming scan).

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fmpm::bench::run_bench;
use fmpm::format::{decode_index, encode_index};
use fmpm_core::kernel::nibble::{LANE_BASELINE, SAD_BASELINE};
use fmpm_core::kernel::{count_bucket_nibble_traced, count_bucket_scalar, BUCKET_CHARS};
use fmpm_core::packed::pack_2bit;
use fmpm_core::{build_index, BwtChar, FmIndex, Kernel, Record, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

fn random_dna(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

fn single(seq: &[u8]) -> FmIndex {
    build_index(seq, vec![Record::new("r1", 0, seq.len() as u64)]).unwrap()
}

/// Sorts every suffix of `text$` directly.
fn oracle_sa(text: &[u8]) -> Vec<usize> {
    let mut t: Vec<u8> = text
        .iter()
        .map(|&b| match b {
            b'A' => 1,
            b'C' => 2,
            b'G' => 3,
            _ => 4,
        })
        .collect();
    t.push(0);
    let mut sa: Vec<usize> = (0..t.len()).collect();
    sa.sort_by(|&a, &b| t[a..].cmp(&t[b..]));
    sa
}

fn oracle_bwt(text: &[u8], sa: &[usize]) -> Vec<u8> {
    sa.iter()
        .map(|&p| if p == 0 { b'$' } else { text[p - 1] })
        .collect()
}

fn naive_positions(text: &[u8], pattern: &[u8]) -> Vec<u64> {
    if pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&i| &text[i..i + pattern.len()] == pattern)
        .map(|i| i as u64)
        .collect()
}

/// `dp[j]` = edit distance between `pattern` and `window[..j]`.
fn edit_distances_to_prefixes(pattern: &[u8], window: &[u8]) -> Vec<usize> {
    let mut prev: Vec<usize> = (0..=window.len()).collect();
    for (i, &pc) in pattern.iter().enumerate() {
        let mut cur = vec![i + 1; window.len() + 1];
        for j in 1..=window.len() {
            let sub = prev[j - 1] + usize::from(window[j - 1] != pc);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev
}

/// Some substring starting at `pos` with length in `[m - z, m + z]` is within
/// edit distance `z` of the pattern.
fn edit_witness(text: &[u8], pos: usize, pattern: &[u8], z: usize) -> bool {
    let m = pattern.len();
    let hi = (m + z).min(text.len() - pos);
    let lo = m.saturating_sub(z);
    if lo > hi {
        return false;
    }
    let d = edit_distances_to_prefixes(pattern, &text[pos..pos + hi]);
    (lo..=hi).any(|len| d[len] <= z)
}

fn hamming_positions(text: &[u8], pattern: &[u8], z: usize) -> Vec<u64> {
    if pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&i| {
            text[i..i + pattern.len()]
                .iter()
                .zip(pattern)
                .filter(|(a, b)| a != b)
                .count()
                <= z
        })
        .map(|i| i as u64)
        .collect()
}

fn positions(index: &FmIndex, pattern: &[u8], z: usize) -> Vec<u64> {
    index.find(pattern, z, None).hits.iter().map(|h| h.global_pos).collect()
}

// ------------------------------------------------------------- criteria

fn c1_worked_tables() -> Outcome {
    let text = b"ACAG";
    let idx = single(text);
    let sa: Vec<usize> = (0..=4).map(|r| idx.locate_row(r) as usize).collect();
    ensure!(sa == [4, 0, 2, 1, 3], "SA {sa:?}");
    let bwt: String = idx.bwt().iter().map(|c| c.to_ascii() as char).collect();
    ensure!(bwt == "G$CAA", "BWT {bwt}");
    ensure!(idx.c_table().0 == [0, 2, 3, 4, 4], "C {:?}", idx.c_table().0);
    let table = [[0, 0, 1, 0], [0, 0, 1, 0], [0, 1, 1, 0], [1, 1, 1, 0], [2, 1, 1, 0]];
    for kernel in Kernel::available() {
        let idx = idx.clone().with_kernel(kernel);
        for (k, row) in table.iter().enumerate() {
            for s in Symbol::ALL {
                let got = idx.occ(s, k as isize);
                ensure!(got == row[s.index()], "{kernel}: Occ({s},{k}) = {got}");
            }
        }
    }
    Ok(format!("SA, BWT, C and 20 Occ cells on {} kernels", Kernel::available().len()))
}

fn c2_worked_registers() -> Outcome {
    let packed = pack_2bit(b"ccacttgcgaaatttacaaggtttattaggtt").unwrap();
    let word = u64::from_le_bytes(packed.as_bytes().try_into().unwrap());
    ensure!(word == 0xfa3cfe813f026f45, "packed word {word:#x}");
    let mut bucket = [0u8; 32];
    bucket[..8].copy_from_slice(packed.as_bytes());
    let trace = count_bucket_nibble_traced(&bucket, 32, Symbol::G);
    ensure!(trace.lanes[0].sad == 0x7f2, "lane SAD {:#x}", trace.lanes[0].sad);
    ensure!(LANE_BASELINE - trace.lanes[0].sad == 6, "lane count");
    ensure!(trace.count == 6, "count {}", trace.count);
    Ok("word 0xfa3cfe813f026f45, SAD 0x7f2, count 6".into())
}

fn random_bucket(rng: &mut ChaCha8Rng) -> [u8; 32] {
    let mut b = [0u8; 32];
    rng.fill(&mut b[..]);
    b
}

fn c3_kernel_equivalence() -> Outcome {
    let start = Instant::now();
    let kernels = Kernel::available();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0u64;
    for _ in 0..100_000 {
        let bucket = random_bucket(&mut rng);
        let prefix = rng.gen_range(0..=BUCKET_CHARS);
        let s = Symbol::from_code(rng.gen_range(0..4));
        let oracle = count_bucket_scalar(&bucket, prefix, s);
        for k in &kernels {
            ensure!(k.count(&bucket, prefix, s) == oracle, "{k} differs at prefix {prefix} {s}");
            checked += 1;
        }
    }
    for _ in 0..100 {
        let bucket = random_bucket(&mut rng);
        for prefix in 0..=BUCKET_CHARS {
            for s in Symbol::ALL {
                let oracle = count_bucket_scalar(&bucket, prefix, s);
                for k in &kernels {
                    ensure!(k.count(&bucket, prefix, s) == oracle, "{k} differs (sweep)");
                    checked += 1;
                }
            }
            let all = kernels[0].count_all4(&bucket, prefix);
            for k in &kernels {
                ensure!(k.count_all4(&bucket, prefix) == all, "{k} all4 differs");
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    let names: Vec<_> = kernels.iter().map(|k| k.name()).collect();
    Ok(format!("{checked} comparisons over {names:?} in {elapsed:.2?}"))
}

fn c4_sad_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut traces = 0;
    for _ in 0..100 {
        let bucket = random_bucket(&mut rng);
        for s in Symbol::ALL {
            let trace = count_bucket_nibble_traced(&bucket, BUCKET_CHARS, s);
            let raw = u64::from(count_bucket_scalar(&bucket, BUCKET_CHARS, s));
            ensure!(raw == SAD_BASELINE - trace.aggregate, "S = {} for raw {raw}", trace.aggregate);
            ensure!(trace.raw_count == raw && u64::from(trace.count) == raw, "trace counts");
            traces += 1;
        }
    }
    Ok(format!("{traces} full-bucket traces"))
}

struct ExactCase {
    text: Vec<u8>,
    patterns: Vec<Vec<u8>>,
}

fn exact_cases() -> Vec<ExactCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=10_000);
            let text = random_dna(&mut rng, n);
            let patterns = (0..10)
                .map(|j| {
                    let m = rng.gen_range(1..=50usize);
                    if j % 2 == 0 && m <= n {
                        let s = rng.gen_range(0..=n - m);
                        text[s..s + m].to_vec()
                    } else {
                        random_dna(&mut rng, m)
                    }
                })
                .collect();
            ExactCase { text, patterns }
        })
        .collect()
}

fn c5_exact_oracle(cases: &[ExactCase]) -> Outcome {
    let start = Instant::now();
    let (mut count, mut present) = (0, 0);
    for case in cases {
        let idx = single(&case.text);
        for p in &case.patterns {
            let expected = naive_positions(&case.text, p);
            let m = idx.exact_search(p);
            ensure!(m.interval.width() == expected.len(), "width {} vs {}", m.interval.width(), expected.len());
            let got = positions(&idx, p, 0);
            ensure!(got == expected, "positions differ for {}", String::from_utf8_lossy(p));
            count += 1;
            present += usize::from(!expected.is_empty());
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("{count} cases ({present} present) in {elapsed:.2?}"))
}

fn mutate(rng: &mut ChaCha8Rng, p: &mut Vec<u8>, edits: usize) {
    for _ in 0..edits {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..p.len());
                p[i] = b"ACGT"[rng.gen_range(0..4)];
            }
            1 => {
                let i = rng.gen_range(0..=p.len());
                p.insert(i, b"ACGT"[rng.gen_range(0..4)]);
            }
            _ if p.len() > 1 => {
                let i = rng.gen_range(0..p.len());
                p.remove(i);
            }
            _ => {}
        }
    }
}

fn c6_inexact_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut hits = 0;
    for _ in 0..200 {
        let n = rng.gen_range(20..=500);
        let text = random_dna(&mut rng, n);
        let idx = single(&text);
        for z in [1usize, 2] {
            for _ in 0..2 {
                let m = rng.gen_range(5..=15).min(n);
                let s = rng.gen_range(0..=n - m);
                let mut p = text[s..s + m].to_vec();
                let edits = rng.gen_range(0..=z);
                mutate(&mut rng, &mut p, edits);
                for h in idx.find(&p, z, None).hits {
                    ensure!(h.diffs <= z, "diffs {} > z", h.diffs);
                    ensure!(
                        edit_witness(&text, h.global_pos as usize, &p, z),
                        "no edit witness at {} for {} z={z}",
                        h.global_pos,
                        String::from_utf8_lossy(&p)
                    );
                    hits += 1;
                }
            }
        }
    }
    Ok(format!("{hits} hits verified by edit-distance DP"))
}

fn c7_mismatch_completeness(cases: &[ExactCase]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut instances = 0;
    for _ in 0..100 {
        let n = rng.gen_range(50..=2000);
        let text = random_dna(&mut rng, n);
        let idx = single(&text);
        for z in [1usize, 2] {
            let m = rng.gen_range(8..=24);
            let s = rng.gen_range(0..=n - m);
            let mut p = text[s..s + m].to_vec();
            for _ in 0..z {
                let i = rng.gen_range(0..m);
                p[i] = b"ACGT"[rng.gen_range(0..4)];
            }
            let reported: BTreeSet<u64> = positions(&idx, &p, z).into_iter().collect();
            for pos in hamming_positions(&text, &p, z) {
                ensure!(reported.contains(&pos), "missed Hamming hit at {pos} (z={z})");
            }
            ensure!(reported.contains(&(s as u64)), "planted position {s} missing");
            instances += 1;
        }
    }
    let mut zero = 0;
    for case in cases {
        let idx = single(&case.text);
        for p in &case.patterns {
            let exact = idx.exact_search(p).interval;
            let inexact = idx.inexact_search(p, 0);
            if exact.is_empty() {
                ensure!(inexact.is_empty(), "z=0 found an absent pattern");
            } else {
                ensure!(
                    inexact.len() == 1 && inexact[0].interval == exact && inexact[0].diffs_used == 0,
                    "z=0 differs from exact search"
                );
            }
            zero += 1;
        }
    }
    Ok(format!("{instances} planted instances; z=0 == exact on {zero} cases"))
}

fn suite8_texts() -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    (0..100)
        .map(|i| {
            let n = if i == 0 { 5000 } else { rng.gen_range(1..=5000) };
            random_dna(&mut rng, n)
        })
        .collect()
}

fn c8_locate(texts: &[Vec<u8>]) -> Outcome {
    let mut rows = 0;
    for text in texts {
        let idx = single(text);
        let sa = oracle_sa(text);
        for (row, &pos) in sa.iter().enumerate() {
            let got = idx.locate_row(row);
            ensure!(got == pos as u64, "row {row}: {got} vs {pos}");
            match idx.psi_inverse(row) {
                fmpm_core::PsiStep::Sentinel => ensure!(pos == 0, "sentinel at SA {pos}"),
                fmpm_core::PsiStep::Row { row: next, .. } => {
                    ensure!(sa[next] == pos - 1, "psi law at row {row}")
                }
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} rows over {} references", texts.len()))
}

fn c9_occ_invariants(texts: &[Vec<u8>]) -> Outcome {
    let mut cells = 0u64;
    for text in texts {
        let sa = oracle_sa(text);
        let bwt = oracle_bwt(text, &sa);
        let base = single(text);
        for kernel in Kernel::available() {
            let idx = base.clone().with_kernel(kernel);
            let sentinel = idx.sentinel_row();
            let mut prev = [0u64; 4];
            for (k, &bwt_k) in bwt.iter().enumerate() {
                let cur: [u64; 4] = std::array::from_fn(|b| idx.occ(Symbol::from_code(b as u8), k as isize));
                let sum: u64 = cur.iter().sum();
                ensure!(sum == (k as u64 + 1) - u64::from(sentinel <= k), "row sum at {k}");
                let steps: Vec<u64> = (0..4).map(|b| cur[b] - prev[b]).collect();
                ensure!(steps.iter().all(|&d| d <= 1), "non-unit step at {k}");
                let bumped = steps.iter().filter(|&&d| d == 1).count();
                match bwt_k {
                    b'$' => ensure!(bumped == 0, "sentinel row {k} bumped a symbol"),
                    c => {
                        let s = Symbol::from_ascii(c).unwrap();
                        ensure!(bumped == 1 && steps[s.index()] == 1, "row {k} step mismatch");
                        ensure!(idx.bwt_char_at(k) == BwtChar::Symbol(s), "bwt char {k}");
                    }
                }
                prev = cur;
                cells += 4;
            }
        }
    }
    Ok(format!("{cells} Occ cells"))
}

fn c10_serialization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let text = random_dna(&mut rng, 10_000);
    let idx = single(&text);
    let bytes = encode_index(&idx);
    let back = decode_index(&bytes).map_err(|e| e.to_string())?;
    ensure!(back == idx, "decoded index differs");
    ensure!(encode_index(&back) == bytes, "re-encoded bytes differ");
    let mut queries = 0;
    for _ in 0..200 {
        let m = rng.gen_range(1..=30);
        let s = rng.gen_range(0..=text.len() - m);
        let p = if queries % 2 == 0 { text[s..s + m].to_vec() } else { random_dna(&mut rng, m) };
        for z in [0, 1] {
            ensure!(idx.find(&p, z, None) == back.find(&p, z, None), "query answers differ");
        }
        queries += 1;
    }
    Ok(format!("{} bytes bit-identical, {queries} queries identical", bytes.len()))
}

fn c11_bench() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let text = random_dna(&mut rng, 20_000);
    let idx = single(&text);
    let kernels = Kernel::available();
    let reports = run_bench(&idx, &kernels, 200, 42);
    ensure!(reports.len() == kernels.len(), "missing reports");
    ensure!(
        reports.iter().all(|r| r.checksum == reports[0].checksum),
        "checksums differ: {:?}",
        reports.iter().map(|r| r.checksum).collect::<Vec<_>>()
    );
    print!("{}", fmpm::bench::format_tsv(&reports));
    Ok(format!("{} kernels, checksum {:08x}", reports.len(), reports[0].checksum))
}

// --------------------------------------------------------------- harness

fn main() {
    let exact = exact_cases();
    let texts = suite8_texts();
    let criteria: Vec<Criterion> = vec![
        ("1 ACAG worked-example tables", Box::new(c1_worked_tables)),
        ("2 nibble-kernel worked-example registers", Box::new(c2_worked_registers)),
        ("3 kernel equivalence", Box::new(c3_kernel_equivalence)),
        ("4 SAD identity", Box::new(c4_sad_identity)),
        ("5 exact-search oracle", Box::new(|| c5_exact_oracle(&exact))),
        ("6 inexact soundness", Box::new(c6_inexact_soundness)),
        ("7 mismatch completeness + z=0", Box::new(|| c7_mismatch_completeness(&exact))),
        ("8 psi-inverse / locate", Box::new(|| c8_locate(&texts))),
        ("9 Occ row-sum and monotonicity", Box::new(|| c9_occ_invariants(&texts))),
        ("10 serialization round trip", Box::new(c10_serialization)),
        ("11 bench harness checksums", Box::new(c11_bench)),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
