//! Token vocabulary with corpus frequency counts.
//!
//! Reserved ids are fixed: `<pad>`=0, `<s>`=1, `</s>`=2, `<unk>`=3. Tokens
//! below the frequency threshold are excluded and map to `<unk>`; their
//! aggregate corpus mass is kept as the `<unk>` count so the frequency-biased
//! drop channel always has a word count to work with.

use std::collections::HashMap;

use super::{TextError, Utterance};

pub const PAD_ID: u32 = 0;
pub const SOS_ID: u32 = 1;
pub const EOS_ID: u32 = 2;
pub const UNK_ID: u32 = 3;

pub const PAD_TOK: &str = "<pad>";
pub const SOS_TOK: &str = "<s>";
pub const EOS_TOK: &str = "</s>";
pub const UNK_TOK: &str = "<unk>";

#[derive(Debug, Clone)]
pub struct Vocab {
    token_to_id: HashMap<String, u32>,
    id_to_token: Vec<String>,
    /// Corpus frequency of each retained token (pre-exclusion counts).
    counts: HashMap<String, u64>,
    /// Aggregate corpus count of all excluded (out-of-vocabulary) tokens.
    unk_count: u64,
}

impl Vocab {
    /// Builds a vocabulary from a corpus, excluding tokens with frequency
    /// below `min_freq`. Retained tokens keep their full corpus frequency.
    pub fn build(corpus: &[Utterance], min_freq: u64) -> Result<Self, TextError> {
        if corpus.is_empty() {
            return Err(TextError::Config("empty corpus for vocabulary".into()));
        }
        let mut raw: HashMap<String, u64> = HashMap::new();
        for u in corpus {
            for t in u.tokens() {
                *raw.entry(t.clone()).or_insert(0) += 1;
            }
        }
        let mut retained: Vec<(String, u64)> = Vec::new();
        let mut unk_count = 0u64;
        for (tok, c) in raw {
            if c >= min_freq {
                retained.push((tok, c));
            } else {
                unk_count += c;
            }
        }
        // Deterministic id assignment: most frequent first, ties lexicographic.
        retained.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        let mut id_to_token: Vec<String> = vec![
            PAD_TOK.to_string(),
            SOS_TOK.to_string(),
            EOS_TOK.to_string(),
            UNK_TOK.to_string(),
        ];
        let mut counts = HashMap::new();
        for (tok, c) in &retained {
            id_to_token.push(tok.clone());
            counts.insert(tok.clone(), *c);
        }
        let token_to_id = id_to_token
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Ok(Vocab { token_to_id, id_to_token, counts, unk_count })
    }

    /// Total number of ids including the four reserved ones.
    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        false // reserved tokens are always present
    }

    /// Unknown tokens map to `<unk>`.
    pub fn id(&self, token: &str) -> u32 {
        *self.token_to_id.get(token).unwrap_or(&UNK_ID)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.token_to_id.contains_key(token)
    }

    pub fn token(&self, id: u32) -> &str {
        &self.id_to_token[id as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    /// Corpus frequency w(token). Out-of-vocabulary tokens get the aggregate
    /// excluded mass, so the drop-probability formula is total.
    pub fn count(&self, token: &str) -> u64 {
        match self.counts.get(token) {
            Some(c) => *c,
            None => self.unk_count,
        }
    }

    pub fn unk_count(&self) -> u64 {
        self.unk_count
    }

    /// Encodes content tokens (no framing).
    pub fn encode(&self, u: &Utterance) -> Vec<u32> {
        u.tokens().iter().map(|t| self.id(t)).collect()
    }

    /// Decodes ids back to tokens; reserved ids render as their markers.
    pub fn decode(&self, ids: &[u32]) -> Vec<String> {
        ids.iter().map(|&i| self.token(i).to_string()).collect()
    }

    /// FNV-1a over the id-ordered token list; used to refuse checkpoints
    /// built against a different vocabulary.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for t in &self.id_to_token {
            for b in t.as_bytes() {
                h ^= *b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
            h ^= 0xff;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }

    /// Union of two vocabularies, merging counts. Used for the shared encoder,
    /// whose input space must cover both utterance kinds.
    pub fn union(&self, other: &Vocab) -> Vocab {
        let mut merged: HashMap<String, u64> = self.counts.clone();
        for (t, c) in &other.counts {
            *merged.entry(t.clone()).or_insert(0) += *c;
        }
        let mut retained: Vec<(String, u64)> = merged.into_iter().collect();
        retained.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut id_to_token: Vec<String> = vec![
            PAD_TOK.to_string(),
            SOS_TOK.to_string(),
            EOS_TOK.to_string(),
            UNK_TOK.to_string(),
        ];
        let mut counts = HashMap::new();
        for (tok, c) in &retained {
            id_to_token.push(tok.clone());
            counts.insert(tok.clone(), *c);
        }
        let token_to_id = id_to_token
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocab {
            token_to_id,
            id_to_token,
            counts,
            unk_count: self.unk_count + other.unk_count,
        }
    }
}
