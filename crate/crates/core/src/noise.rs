//! Corruption channels for the denoising task: importance-aware word
//! dropping, mixed-source addition, and n-gram shuffling, composed in the
//! fixed order drop -> add -> shuffle (the whole utterance is shuffled after
//! the addition step so inserted words participate).

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textstats::{wmd, EmbeddingTable, Utterance, Vocab};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NoiseError {
    #[error("configuration error: {0}")]
    Config(String),
}

/// Which channels run, in the fixed composition order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnabledChannels {
    pub drop: bool,
    pub add: bool,
    pub shuffle: bool,
}

impl EnabledChannels {
    pub const ALL: EnabledChannels = EnabledChannels { drop: true, add: true, shuffle: true };
    pub const NONE: EnabledChannels = EnabledChannels { drop: false, add: false, shuffle: false };

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.drop {
            parts.push("drop");
        }
        if self.add {
            parts.push("add");
        }
        if self.shuffle {
            parts.push("shuffle");
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// Noise-channel parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Maximum per-token drop probability.
    pub p_max: f64,
    /// Candidate pool size for mixed-source addition.
    pub candidate_pool: usize,
    /// Fraction interval of source words inserted by mixed-source addition.
    pub insert_fraction: (f64, f64),
    /// Shuffle group size.
    pub ngram: usize,
    pub enabled: EnabledChannels,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            p_max: 0.2,
            candidate_pool: 50,
            insert_fraction: (0.10, 0.20),
            ngram: 2,
            enabled: EnabledChannels::ALL,
        }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<(), NoiseError> {
        if !(self.p_max > 0.0 && self.p_max <= 1.0) {
            return Err(NoiseError::Config(format!("p_max out of (0,1]: {}", self.p_max)));
        }
        if self.candidate_pool < 1 {
            return Err(NoiseError::Config("candidate_pool must be >= 1".into()));
        }
        let (lo, hi) = self.insert_fraction;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(NoiseError::Config(format!(
                "insert_fraction interval invalid: [{lo}, {hi}]"
            )));
        }
        if self.ngram < 1 {
            return Err(NoiseError::Config("ngram must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-token drop probability: min(p_max, w(t) / sum of w over the utterance).
pub fn drop_probability(u: &Utterance, vocab: &Vocab, p_max: f64, index: usize) -> f64 {
    let total: u64 = u.tokens().iter().map(|t| vocab.count(t)).sum();
    if total == 0 {
        return 0.0;
    }
    let w = vocab.count(&u.tokens()[index]);
    p_max.min(w as f64 / total as f64)
}

/// Importance-aware word dropping. Each token is independently dropped with
/// its clamped relative-frequency probability; if every token would drop,
/// the lowest-probability token (first on ties) is retained so the output is
/// never empty.
pub fn drop_words(u: &Utterance, vocab: &Vocab, p_max: f64, rng: &mut impl Rng) -> Utterance {
    if u.len() == 1 {
        return u.clone();
    }
    let probs: Vec<f64> = (0..u.len())
        .map(|i| drop_probability(u, vocab, p_max, i))
        .collect();
    let mut kept: Vec<String> = Vec::with_capacity(u.len());
    for (tok, p) in u.tokens().iter().zip(&probs) {
        if rng.gen::<f64>() >= *p {
            kept.push(tok.clone());
        }
    }
    if kept.is_empty() {
        let (idx, _) = probs
            .iter()
            .enumerate()
            .fold((0usize, f64::INFINITY), |(bi, bp), (i, &p)| {
                if p < bp {
                    (i, p)
                } else {
                    (bi, bp)
                }
            });
        kept.push(u.tokens()[idx].clone());
    }
    Utterance::new(kept, u.kind())
}

/// Samples min(C, |pool|) candidates without replacement and returns the one
/// with minimal Word Mover's Distance to `u`; ties break by sample order.
pub fn select_candidate<'p>(
    u: &Utterance,
    pool: &'p [Utterance],
    candidate_pool: usize,
    emb: &EmbeddingTable,
    rng: &mut impl Rng,
) -> Result<&'p Utterance, NoiseError> {
    if pool.is_empty() {
        return Err(NoiseError::Config("empty candidate pool".into()));
    }
    let k = candidate_pool.min(pool.len());
    let sample: Vec<&Utterance> = pool.choose_multiple(rng, k).collect();
    let mut best = sample[0];
    let mut best_d = f64::INFINITY;
    for cand in sample {
        let d = wmd(u, cand, emb);
        if d < best_d {
            best_d = d;
            best = cand;
        }
    }
    Ok(best)
}

/// Mixed-source addition: inserts k tokens sampled without replacement from
/// `source` at independently uniform positions, where k is a rounded random
/// fraction of |source| clamped to [1, |source|].
pub fn add_mixed(
    u: &Utterance,
    source: &Utterance,
    frac: (f64, f64),
    rng: &mut impl Rng,
) -> Utterance {
    let f = if frac.1 > frac.0 {
        rng.gen_range(frac.0..=frac.1)
    } else {
        frac.0
    };
    // round half up, then clamp
    let k = ((f * source.len() as f64 + 0.5).floor() as usize).clamp(1, source.len());
    let picked: Vec<&String> = source.tokens().choose_multiple(rng, k).collect();
    let mut out: Vec<String> = u.tokens().to_vec();
    for tok in picked {
        let pos = rng.gen_range(0..=out.len());
        out.insert(pos, tok.clone());
    }
    Utterance::new(out, u.kind())
}

/// Splits the utterance left-to-right into groups of n tokens (last group may
/// be short), then permutes the groups uniformly. Order inside each group is
/// preserved.
pub fn shuffle_ngrams(u: &Utterance, n: usize, rng: &mut impl Rng) -> Utterance {
    assert!(n >= 1);
    if u.len() <= n {
        return u.clone();
    }
    let groups: Vec<&[String]> = u.tokens().chunks(n).collect();
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.shuffle(rng);
    let mut out = Vec::with_capacity(u.len());
    for gi in order {
        out.extend(groups[gi].iter().cloned());
    }
    Utterance::new(out, u.kind())
}

/// Full corruption channel: enabled sub-channels applied in the fixed order
/// drop -> add -> shuffle. With everything disabled this is the identity.
pub fn corrupt(
    u: &Utterance,
    spec: &NoiseSpec,
    vocab: &Vocab,
    pool: &[Utterance],
    emb: &EmbeddingTable,
    rng: &mut impl Rng,
) -> Result<Utterance, NoiseError> {
    spec.validate()?;
    let mut cur = u.clone();
    if spec.enabled.drop {
        cur = drop_words(&cur, vocab, spec.p_max, rng);
    }
    if spec.enabled.add {
        let source = select_candidate(&cur, pool, spec.candidate_pool, emb, rng)?;
        cur = add_mixed(&cur, source, spec.insert_fraction, rng);
    }
    if spec.enabled.shuffle {
        cur = shuffle_ngrams(&cur, spec.ngram, rng);
    }
    Ok(cur)
}
