//! Sentence-level BLEU with brevity penalty.
//!
//! Precisions for n >= 2 use add-one smoothing; unigram precision is left
//! unsmoothed so disjoint sentences still score exactly zero. Utterances here
//! are short, and unsmoothed sentence BLEU would collapse to zero whenever a
//! 4-gram is missing, which would break model selection.

use super::Utterance;
use std::collections::HashMap;

/// BLEU(candidate, reference) in [0, 1]. Not symmetric; BLEU(c, c) = 1.
pub fn bleu(candidate: &Utterance, reference: &Utterance, max_n: usize) -> f64 {
    assert!(max_n >= 1);
    let cand = candidate.tokens();
    let refr = reference.tokens();

    let mut log_prec_sum = 0.0;
    for n in 1..=max_n {
        let (matched, total) = ngram_overlap(cand, refr, n);
        let p = if n == 1 {
            if total == 0 {
                return 0.0;
            }
            matched as f64 / total as f64
        } else {
            (matched + 1) as f64 / (total + 1) as f64
        };
        if p == 0.0 {
            return 0.0;
        }
        log_prec_sum += p.ln() / max_n as f64;
    }

    let c = cand.len() as f64;
    let r = refr.len() as f64;
    let bp = if c >= r { 1.0 } else { (1.0 - r / c).exp() };
    bp * log_prec_sum.exp()
}

/// Clipped n-gram matches and candidate n-gram total.
fn ngram_overlap(cand: &[String], refr: &[String], n: usize) -> (u64, u64) {
    if cand.len() < n {
        return (0, 0);
    }
    let mut ref_counts: HashMap<&[String], u64> = HashMap::new();
    if refr.len() >= n {
        for g in refr.windows(n) {
            *ref_counts.entry(g).or_insert(0) += 1;
        }
    }
    let mut cand_counts: HashMap<&[String], u64> = HashMap::new();
    for g in cand.windows(n) {
        *cand_counts.entry(g).or_insert(0) += 1;
    }
    let total = (cand.len() - n + 1) as u64;
    let matched = cand_counts
        .iter()
        .map(|(g, c)| (*c).min(*ref_counts.get(g).unwrap_or(&0)))
        .sum();
    (matched, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textstats::UtteranceKind::Natural;

    fn u(s: &str) -> Utterance {
        Utterance::parse(s, Natural).unwrap()
    }

    #[test]
    fn identical_sentences_score_one() {
        for s in ["a", "the cat sat", "number of team words here"] {
            let x = u(s);
            assert!((bleu(&x, &x, 4) - 1.0).abs() < 1e-12, "BLEU({s},{s}) != 1");
        }
    }

    #[test]
    fn zero_unigram_overlap_scores_zero() {
        assert_eq!(bleu(&u("a b c"), &u("x y z"), 4), 0.0);
    }

    /// Hand computation: all smoothed precisions are 1 (matches 3/3, 2/2, 1/1,
    /// and (0+1)/(0+1) for the missing 4-grams), so BLEU reduces to the
    /// brevity penalty exp(1 - 4/3).
    #[test]
    fn short_candidate_hand_computed() {
        let got = bleu(&u("the cat sat"), &u("the cat sat down"), 4);
        let expected = (1.0f64 - 4.0 / 3.0).exp();
        assert!(
            (got - expected).abs() < 1e-12,
            "got {got}, expected {expected}"
        );
    }

    /// Independent reference computation of the full formula for a partial
    /// overlap case, frozen from a by-hand evaluation:
    /// candidate "a b c d" vs reference "a b x d":
    ///   p1 = 3/4, p2 = (1+1)/(3+1) = 1/2, p3 = (0+1)/(2+1) = 1/3,
    ///   p4 = (0+1)/(1+1) = 1/2, BP = 1.
    #[test]
    fn partial_overlap_hand_computed() {
        let got = bleu(&u("a b c d"), &u("a b x d"), 4);
        let expected = (0.75f64 * 0.5 * (1.0 / 3.0) * 0.5).powf(0.25);
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn clipping_limits_repeated_tokens() {
        // candidate repeats "the"; reference has it twice
        let (m, t) = super::ngram_overlap(
            &["the", "the", "the", "the"].map(String::from),
            &["the", "cat", "the"].map(String::from),
            1,
        );
        assert_eq!((m, t), (2, 4));
    }
}
