//! Sentence-level BLEU-3 and ROUGE-1/2/L.

use std::collections::HashMap;

use serde::Serialize;

/// Lowercased whitespace tokens with surrounding punctuation removed.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for window in tokens.windows(n) {
        let key: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

/// Matched n-grams with counts clipped by the other side.
fn overlap<S: AsRef<str>>(hyp: &[S], reference: &[S], n: usize) -> (usize, usize, usize) {
    let h = ngram_counts(hyp, n);
    let r = ngram_counts(reference, n);
    let matched = h
        .iter()
        .map(|(gram, &c)| c.min(r.get(gram).copied().unwrap_or(0)))
        .sum();
    (matched, h.values().sum(), r.values().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bleu {
    /// Score in [0, 100].
    pub score: f64,
    /// Modified 1-, 2- and 3-gram precisions; zero where the hypothesis has no n-grams.
    pub precisions: [f64; 3],
    pub brevity_penalty: f64,
}

impl Bleu {
    /// All three precisions are nonzero.
    pub fn assessable(&self) -> bool {
        self.precisions.iter().all(|&p| p > 0.0)
    }
}

pub fn bleu3_detail<S: AsRef<str>>(hypothesis: &[S], reference: &[S]) -> Bleu {
    let mut precisions = [0.0; 3];
    // Orders the hypothesis is too short for are left out of the mean.
    let mut orders = Vec::new();
    for (i, p) in precisions.iter_mut().enumerate() {
        let (matched, total, _) = overlap(hypothesis, reference, i + 1);
        if total > 0 {
            *p = matched as f64 / total as f64;
            orders.push(*p);
        }
    }
    let (c, r) = (hypothesis.len() as f64, reference.len() as f64);
    let brevity_penalty = if c == 0.0 {
        0.0
    } else if c < r {
        (1.0 - r / c).exp()
    } else {
        1.0
    };
    let score = if !orders.is_empty() && orders.iter().all(|&p| p > 0.0) {
        let log_mean = orders.iter().map(|p| p.ln()).sum::<f64>() / orders.len() as f64;
        100.0 * brevity_penalty * log_mean.exp()
    } else {
        0.0
    };
    Bleu {
        score,
        precisions,
        brevity_penalty,
    }
}

pub fn bleu3<S: AsRef<str>>(hypothesis: &[S], reference: &[S]) -> f64 {
    bleu3_detail(hypothesis, reference).score
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rouge {
    pub rouge1: f64,
    pub rouge2: f64,
    pub rouge_l: f64,
}

fn f1(matched: usize, hyp_total: usize, ref_total: usize) -> f64 {
    if matched == 0 || hyp_total == 0 || ref_total == 0 {
        return 0.0;
    }
    let p = matched as f64 / hyp_total as f64;
    let r = matched as f64 / ref_total as f64;
    100.0 * 2.0 * p * r / (p + r)
}

fn lcs_len<S: AsRef<str>>(a: &[S], b: &[S]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x.as_ref() == y.as_ref() {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    row[b.len()]
}

/// F-measures of ROUGE-1, ROUGE-2 and ROUGE-L, each in [0, 100].
pub fn rouge<S: AsRef<str>>(hypothesis: &[S], reference: &[S]) -> Rouge {
    let (m1, h1, r1) = overlap(hypothesis, reference, 1);
    let (m2, h2, r2) = overlap(hypothesis, reference, 2);
    Rouge {
        rouge1: f1(m1, h1, r1),
        rouge2: f1(m2, h2, r2),
        rouge_l: f1(lcs_len(hypothesis, reference), hypothesis.len(), reference.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn tokenization() {
        assert_eq!(toks("Bill plays a game."), ["bill", "plays", "a", "game"]);
        assert_eq!(toks(" , \"Hi\" ..."), ["hi"]);
    }

    #[test]
    fn bill_plays_game() {
        let hyp = toks("Bill plays game");
        let reference = toks("Bill plays a game.");
        // unigrams 3/3, bigrams 1/2 (bill plays), trigrams 0/1
        let b = bleu3_detail(&hyp, &reference);
        assert_eq!(b.precisions, [1.0, 0.5, 0.0]);
        assert!(!b.assessable());
        assert_eq!(b.score, 0.0);
        assert!((b.brevity_penalty - (1.0f64 - 4.0 / 3.0).exp()).abs() < 1e-15);
        // LCS = 3: P = 1, R = 3/4 ; bigram overlap 1: P = 1/2, R = 1/3
        let r = rouge(&hyp, &reference);
        assert!((r.rouge1 - 100.0 * 6.0 / 7.0).abs() < 1e-9);
        assert!((r.rouge2 - 40.0).abs() < 1e-9);
        assert!((r.rouge_l - 100.0 * 6.0 / 7.0).abs() < 1e-9);
    }

    #[test]
    fn short_hypotheses_use_available_orders() {
        let b = bleu3_detail(&toks("one two"), &toks("one two"));
        assert_eq!(b.score, 100.0);
        assert!(!b.assessable());
        let b = bleu3_detail(&toks("one two"), &toks("one two three"));
        assert!((b.score - 100.0 * (-0.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn edge_cases() {
        let empty: Vec<String> = vec![];
        let one = toks("x");
        assert_eq!(bleu3(&empty, &one), 0.0);
        assert!(!bleu3_detail(&empty, &one).assessable());
        assert_eq!(rouge(&empty, &empty), Rouge { rouge1: 0.0, rouge2: 0.0, rouge_l: 0.0 });
        let r = rouge(&toks("a b c"), &toks("d e f"));
        assert_eq!((r.rouge1, r.rouge2, r.rouge_l), (0.0, 0.0, 0.0));
    }

    fn words() -> impl Strategy<Value = Vec<String>> {
        prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]).prop_map(String::from), 0..12)
    }

    proptest! {
        #[test]
        fn identity_scores_full(x in words()) {
            prop_assume!(!x.is_empty());
            prop_assert!((bleu3(&x, &x) - 100.0).abs() < 1e-9);
            let r = rouge(&x, &x);
            prop_assert!((r.rouge1 - 100.0).abs() < 1e-9);
            prop_assert!((r.rouge_l - 100.0).abs() < 1e-9);
            if x.len() >= 2 {
                prop_assert!((r.rouge2 - 100.0).abs() < 1e-9);
            }
        }

        #[test]
        fn scores_in_range(h in words(), r in words()) {
            let b = bleu3(&h, &r);
            let s = rouge(&h, &r);
            for v in [b, s.rouge1, s.rouge2, s.rouge_l] {
                prop_assert!((0.0..=100.0 + 1e-9).contains(&v));
            }
        }

        #[test]
        fn matched_suffix_keeps_rouge1(h in words(), r in words(), tail in words()) {
            let before = rouge(&h, &r).rouge1;
            let h2: Vec<String> = h.iter().chain(&tail).cloned().collect();
            let r2: Vec<String> = r.iter().chain(&tail).cloned().collect();
            prop_assert!(rouge(&h2, &r2).rouge1 + 1e-9 >= before);
        }
    }
}
