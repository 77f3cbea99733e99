//! Character- and token-level text metrics: edit similarity, threshold
//! fractions, sentence BLEU, ROUGE, and distinct-n.

use std::collections::{HashMap, HashSet};

use super::MetricError;

/// Whitespace tokenization used by every token-level metric.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Character-level edit distance (insertions, deletions,
/// substitutions, all cost 1).
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Normalized edit similarity `1 - dist / max(|a|, |b|)` over
/// characters; `1.0` when both strings are empty.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let la = a.chars().count();
    let lb = b.chars().count();
    let longest = la.max(lb);
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein_distance(a, b) as f64 / longest as f64
}

/// Fraction of scores exceeding threshold `p` (strictly), except that
/// `p = 1.0` counts perfect scores, i.e. `score = 1.0`.
pub fn lev_threshold_fraction(scores: &[f64], p: f64) -> Result<f64, MetricError> {
    if scores.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let hits = if p >= 1.0 {
        scores.iter().filter(|&&s| s >= 1.0).count()
    } else {
        scores.iter().filter(|&&s| s > p).count()
    };
    Ok(hits as f64 / scores.len() as f64)
}

/// Smoothing mode for [`bleu`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    /// Plain sentence BLEU: any zero-count n-gram order zeroes the
    /// whole score.
    None,
    /// Add-one smoothing applied to zero-count orders:
    /// `(matched + 1) / (total + 1)` whenever `matched = 0`.
    AddOne,
}

/// Sentence BLEU in `[0, 100]`: the geometric mean of modified n-gram
/// precisions for orders `1..=max_n` (uniform weights), times the
/// brevity penalty `exp(1 - r/c)` for predictions shorter than the
/// closest reference (ties prefer the shorter reference).
pub fn bleu(
    pred: &[&str],
    refs: &[&[&str]],
    max_n: usize,
    smoothing: Smoothing,
) -> Result<f64, MetricError> {
    if max_n == 0 {
        return Err(MetricError::InvalidOrder);
    }
    if pred.is_empty() {
        return Err(MetricError::EmptyPrediction);
    }
    if refs.is_empty() || refs.iter().any(|r| r.is_empty()) {
        return Err(MetricError::EmptyReference);
    }
    let c = pred.len();
    let r = refs
        .iter()
        .map(|r| r.len())
        .min_by_key(|&l| (l.abs_diff(c), l))
        .expect("refs checked nonempty");
    let brevity = if c >= r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let total = if c >= n { c - n + 1 } else { 0 };
        let mut matched = 0usize;
        if total > 0 {
            let mut pred_counts: HashMap<&[&str], usize> = HashMap::new();
            for window in pred.windows(n) {
                *pred_counts.entry(window).or_insert(0) += 1;
            }
            let mut ref_max: HashMap<&[&str], usize> = HashMap::new();
            for reference in refs {
                if reference.len() < n {
                    continue;
                }
                let mut counts: HashMap<&[&str], usize> = HashMap::new();
                for window in reference.windows(n) {
                    *counts.entry(window).or_insert(0) += 1;
                }
                for (gram, count) in counts {
                    let slot = ref_max.entry(gram).or_insert(0);
                    *slot = (*slot).max(count);
                }
            }
            matched = pred_counts
                .iter()
                .map(|(gram, &count)| count.min(ref_max.get(gram).copied().unwrap_or(0)))
                .sum();
        }
        let precision = match smoothing {
            Smoothing::None => {
                if matched == 0 {
                    return Ok(0.0);
                }
                matched as f64 / total as f64
            }
            Smoothing::AddOne => {
                if matched == 0 {
                    1.0 / (total as f64 + 1.0)
                } else {
                    matched as f64 / total as f64
                }
            }
        };
        log_sum += precision.ln() / max_n as f64;
    }
    Ok(100.0 * brevity * log_sum.exp())
}

/// ROUGE variant: n-gram overlap for n in {1, 2, 4}, or longest common
/// subsequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RougeVariant {
    One,
    Two,
    Four,
    Lcs,
}

impl RougeVariant {
    pub const ALL: [RougeVariant; 4] =
        [RougeVariant::One, RougeVariant::Two, RougeVariant::Four, RougeVariant::Lcs];

    /// Conventional short label: "1", "2", "4", or "L".
    pub fn label(self) -> &'static str {
        match self {
            RougeVariant::One => "1",
            RougeVariant::Two => "2",
            RougeVariant::Four => "4",
            RougeVariant::Lcs => "L",
        }
    }
}

/// Precision / recall / F1 triple for one ROUGE variant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn rouge_from_counts(overlap: usize, pred_total: usize, ref_total: usize) -> RougeScore {
    let precision = if pred_total == 0 { 0.0 } else { overlap as f64 / pred_total as f64 };
    let recall = if ref_total == 0 { 0.0 } else { overlap as f64 / ref_total as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    RougeScore { precision, recall, f1 }
}

fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for ta in a {
        for (j, tb) in b.iter().enumerate() {
            cur[j + 1] = if ta == tb { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE between a prediction and a single reference. N-gram overlap is
/// clipped at the reference counts; the LCS variant scores the longest
/// common subsequence against each side's length.
pub fn rouge(pred: &[&str], reference: &[&str], variant: RougeVariant) -> RougeScore {
    match variant {
        RougeVariant::Lcs => {
            rouge_from_counts(lcs_len(pred, reference), pred.len(), reference.len())
        }
        _ => {
            let n = match variant {
                RougeVariant::One => 1,
                RougeVariant::Two => 2,
                RougeVariant::Four => 4,
                RougeVariant::Lcs => unreachable!(),
            };
            let pred_total = pred.len().saturating_sub(n - 1);
            let ref_total = reference.len().saturating_sub(n - 1);
            let mut ref_counts: HashMap<&[&str], usize> = HashMap::new();
            for window in reference.windows(n) {
                *ref_counts.entry(window).or_insert(0) += 1;
            }
            let mut overlap = 0usize;
            for window in pred.windows(n) {
                if let Some(count) = ref_counts.get_mut(window) {
                    if *count > 0 {
                        *count -= 1;
                        overlap += 1;
                    }
                }
            }
            rouge_from_counts(overlap, pred_total, ref_total)
        }
    }
}

/// Corpus-level n-gram diversity: distinct n-grams over total n-grams
/// across all texts; `0.0` when no n-grams exist.
pub fn distinct_n(texts: &[Vec<&str>], n: usize) -> f64 {
    let mut seen: HashSet<&[&str]> = HashSet::new();
    let mut total = 0usize;
    for tokens in texts {
        for window in tokens.windows(n) {
            seen.insert(window);
            total += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        seen.len() as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Full-matrix reference edit distance, kept deliberately naive.
    fn dp_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in dp.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            dp[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                dp[i][j] =
                    (dp[i - 1][j - 1] + cost).min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
            }
        }
        dp[a.len()][b.len()]
    }

    #[test]
    fn levenshtein_classic_pair() {
        assert_eq!(levenshtein_distance("kitten", "sitting"), 3);
        let sim = levenshtein_similarity("kitten", "sitting");
        assert!((sim - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn levenshtein_identity_and_empty() {
        assert_eq!(levenshtein_similarity("abc", "abc"), 1.0);
        assert_eq!(levenshtein_similarity("", ""), 1.0);
        assert_eq!(levenshtein_similarity("", "abc"), 0.0);
    }

    #[test]
    fn threshold_fraction_counts_strictly_above() {
        let scores = [1.0, 0.9, 0.75, 0.5, 0.2];
        assert_eq!(lev_threshold_fraction(&scores, 0.5).unwrap(), 3.0 / 5.0);
        assert_eq!(lev_threshold_fraction(&scores, 0.75).unwrap(), 2.0 / 5.0);
        assert_eq!(lev_threshold_fraction(&scores, 0.9).unwrap(), 1.0 / 5.0);
    }

    #[test]
    fn threshold_one_counts_perfect_scores_inclusively() {
        let scores = [1.0, 1.0, 0.999];
        assert_eq!(lev_threshold_fraction(&scores, 1.0).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn threshold_fraction_rejects_empty_input() {
        assert_eq!(lev_threshold_fraction(&[], 0.5), Err(MetricError::EmptyCorpus));
    }

    #[test]
    fn bleu_identity_is_one_hundred() {
        let tokens = tokenize("add the acid to the flask");
        let score = bleu(&tokens, &[&tokens], 4, Smoothing::None).unwrap();
        assert!((score - 100.0).abs() < 1e-9);
    }

    #[test]
    fn bleu_brevity_penalty_case() {
        // Three matching tokens against a four-token reference: all
        // precisions are 1, so the score is the brevity penalty alone.
        let pred = tokenize("the cat sat");
        let reference = tokenize("the cat sat on");
        let score = bleu(&pred, &[&reference], 2, Smoothing::None).unwrap();
        let expected = 100.0 * (1.0f64 - 4.0 / 3.0).exp();
        assert!((score - expected).abs() < 1e-6, "got {score}, want {expected}");
    }

    #[test]
    fn bleu_disjoint_vocabulary_is_zero_unsmoothed() {
        let pred = tokenize("alpha beta gamma");
        let reference = tokenize("delta epsilon zeta");
        assert_eq!(bleu(&pred, &[&reference], 2, Smoothing::None).unwrap(), 0.0);
        let smoothed = bleu(&pred, &[&reference], 2, Smoothing::AddOne).unwrap();
        assert!(smoothed > 0.0);
    }

    #[test]
    fn bleu_add_one_only_touches_zero_count_orders() {
        // Unigrams overlap, bigrams do not: the unigram precision must
        // stay exact while the bigram precision is smoothed.
        let pred = tokenize("a x b");
        let reference = tokenize("a b c");
        let score = bleu(&pred, &[&reference], 2, Smoothing::AddOne).unwrap();
        let expected = 100.0 * ((2.0f64 / 3.0).ln() / 2.0 + (1.0f64 / 3.0).ln() / 2.0).exp();
        assert!((score - expected).abs() < 1e-9);
    }

    #[test]
    fn bleu_rejects_empty_sides() {
        let tokens = tokenize("a b");
        assert_eq!(
            bleu(&[], &[&tokens], 2, Smoothing::None),
            Err(MetricError::EmptyPrediction)
        );
        assert_eq!(bleu(&tokens, &[], 2, Smoothing::None), Err(MetricError::EmptyReference));
        assert_eq!(bleu(&tokens, &[&tokens], 0, Smoothing::None), Err(MetricError::InvalidOrder));
    }

    #[test]
    fn rouge_one_two_thirds_case() {
        let pred = tokenize("a b c");
        let reference = tokenize("a c d");
        let score = rouge(&pred, &reference, RougeVariant::One);
        assert!((score.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((score.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((score.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rouge_identity_is_perfect() {
        let tokens = tokenize("x y z w");
        for variant in RougeVariant::ALL {
            let score = rouge(&tokens, &tokens, variant);
            assert_eq!((score.precision, score.recall, score.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn rouge_lcs_of_reversed_tokens() {
        let pred = tokenize("a b c");
        let reference = tokenize("c b a");
        let score = rouge(&pred, &reference, RougeVariant::Lcs);
        assert!((score.recall - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rouge_empty_sides_score_zero() {
        let tokens = tokenize("a b");
        let score = rouge(&[], &tokens, RougeVariant::One);
        assert_eq!((score.precision, score.recall, score.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn distinct_counts_unique_ngrams() {
        let corpus = vec![tokenize("a b a b"), tokenize("a b")];
        // Unigrams: 6 total, 2 distinct.
        assert!((distinct_n(&corpus, 1) - 2.0 / 6.0).abs() < 1e-12);
        // Bigrams: "a b" x2 + "b a" + "a b" = 4 total, 2 distinct.
        assert!((distinct_n(&corpus, 2) - 2.0 / 4.0).abs() < 1e-12);
        assert_eq!(distinct_n(&[], 2), 0.0);
        assert_eq!(distinct_n(&corpus, 9), 0.0);
    }

    fn token_seq() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec("[abcd]{1,3}", 4..12)
    }

    proptest! {
        #[test]
        fn distance_matches_dp_oracle(a in "[a-d]{0,20}", b in "[a-d]{0,20}") {
            prop_assert_eq!(levenshtein_distance(&a, &b), dp_oracle(&a, &b));
        }

        #[test]
        fn distance_is_symmetric(a in "[a-e]{0,15}", b in "[a-e]{0,15}") {
            prop_assert_eq!(levenshtein_distance(&a, &b), levenshtein_distance(&b, &a));
        }

        #[test]
        fn distance_satisfies_triangle_inequality(
            a in "[a-c]{0,10}", b in "[a-c]{0,10}", c in "[a-c]{0,10}"
        ) {
            let ab = levenshtein_distance(&a, &b);
            let bc = levenshtein_distance(&b, &c);
            let ac = levenshtein_distance(&a, &c);
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn threshold_fraction_is_monotone(
            mut scores in proptest::collection::vec(0.0f64..=1.0, 1..40),
            lo in 0.0f64..0.9,
            hi_gap in 0.01f64..0.1,
        ) {
            scores.iter_mut().for_each(|s| *s = (*s * 100.0).round() / 100.0);
            let hi = (lo + hi_gap).min(1.0);
            let f_lo = lev_threshold_fraction(&scores, lo).unwrap();
            let f_hi = lev_threshold_fraction(&scores, hi).unwrap();
            prop_assert!(f_hi <= f_lo);
        }

        #[test]
        fn bleu_and_rouge_self_identity(tokens in token_seq()) {
            let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
            let score = bleu(&refs, &[&refs], 2, Smoothing::None).unwrap();
            prop_assert!((score - 100.0).abs() < 1e-9);
            for variant in RougeVariant::ALL {
                let r = rouge(&refs, &refs, variant);
                prop_assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
            }
        }

        #[test]
        fn bleu_stays_in_range(
            a in proptest::collection::vec("[ab]{1,2}", 1..10),
            b in proptest::collection::vec("[ab]{1,2}", 1..10),
        ) {
            let pred: Vec<&str> = a.iter().map(String::as_str).collect();
            let reference: Vec<&str> = b.iter().map(String::as_str).collect();
            for smoothing in [Smoothing::None, Smoothing::AddOne] {
                let score = bleu(&pred, &[&reference], 4, smoothing).unwrap();
                prop_assert!((0.0..=100.0 + 1e-9).contains(&score));
            }
        }
    }
}
