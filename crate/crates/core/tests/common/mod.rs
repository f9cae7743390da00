#![allow(dead_code)]

use std::path::PathBuf;

use gfsynth::ingest::{parse_conllu, SentenceFacts};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn conllu_fixture(rel: &str) -> Vec<SentenceFacts> {
    parse_conllu(&read_fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn corpus_sentences() -> Vec<SentenceFacts> {
    ["people", "mathematics", "food_and_drink"]
        .iter()
        .flat_map(|p| conllu_fixture(&format!("corpus/{p}/parses.conllu")))
        .collect()
}

/// `(hypothesis, reference)` rows of the metric fixture.
pub fn metric_pairs() -> Vec<(String, String)> {
    read_fixture("metrics/pairs.tsv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (h, r) = l.split_once('\t').expect("two columns");
            (h.to_string(), r.to_string())
        })
        .collect()
}

/// Slow reference scorers written without the library's n-gram tables.
pub mod oracle {
    fn grams(tokens: &[String], n: usize) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i + n <= tokens.len() {
            out.push(tokens[i..i + n].to_vec());
            i += 1;
        }
        out
    }

    fn occurrences(list: &[Vec<String>], g: &[String]) -> usize {
        list.iter().filter(|x| x.as_slice() == g).count()
    }

    /// Clipped matches, hypothesis n-grams, reference n-grams.
    fn clipped(h: &[String], r: &[String], n: usize) -> (f64, f64, f64) {
        let hg = grams(h, n);
        let rg = grams(r, n);
        let mut seen: Vec<&Vec<String>> = Vec::new();
        let mut matched = 0;
        for g in &hg {
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            matched += occurrences(&hg, g).min(occurrences(&rg, g));
        }
        (matched as f64, hg.len() as f64, rg.len() as f64)
    }

    pub fn bleu3(h: &[String], r: &[String]) -> f64 {
        let mut product = 1.0;
        let mut orders = 0;
        for n in 1..=3 {
            let (m, total, _) = clipped(h, r, n);
            if total == 0.0 {
                continue;
            }
            if m == 0.0 {
                return 0.0;
            }
            product *= m / total;
            orders += 1;
        }
        if orders == 0 {
            return 0.0;
        }
        let bp = if h.len() < r.len() {
            (1.0 - r.len() as f64 / h.len() as f64).exp()
        } else {
            1.0
        };
        100.0 * bp * product.powf(1.0 / orders as f64)
    }

    fn f(m: f64, a: f64, b: f64) -> f64 {
        if m == 0.0 {
            return 0.0;
        }
        let p = m / a;
        let r = m / b;
        100.0 * 2.0 * p * r / (p + r)
    }

    fn is_subsequence(small: &[&String], big: &[String]) -> bool {
        let mut it = big.iter();
        small.iter().all(|s| it.any(|b| b == *s))
    }

    /// Longest common subsequence by trying every subset of the shorter side.
    fn lcs(a: &[String], b: &[String]) -> usize {
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        assert!(short.len() <= 20, "too long for exhaustive search");
        let mut best = 0;
        for mask in 0u32..(1 << short.len()) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let pick: Vec<&String> = (0..short.len()).filter(|i| mask & (1 << i) != 0).map(|i| &short[i]).collect();
            if is_subsequence(&pick, long) {
                best = size;
            }
        }
        best
    }

    pub fn rouge(h: &[String], r: &[String]) -> (f64, f64, f64) {
        let (m1, a1, b1) = clipped(h, r, 1);
        let (m2, a2, b2) = clipped(h, r, 2);
        let l = lcs(h, r) as f64;
        (f(m1, a1, b1), f(m2, a2, b2), f(l, h.len() as f64, r.len() as f64))
    }
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
