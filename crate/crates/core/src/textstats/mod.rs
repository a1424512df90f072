//! Tokenization, vocabularies, BLEU and Word Mover's Distance.
//!
//! Everything downstream (noise channels, models, rewards, model selection)
//! consumes the types defined here. Tokenization is whitespace splitting over
//! pre-normalized lowercase text; the synthetic domain controls its own
//! surface forms, so nothing smarter is needed.

mod bleu;
mod embedding;
mod vocab;
mod wmd;

pub use bleu::bleu;
pub use embedding::EmbeddingTable;
pub use vocab::{Vocab, PAD_ID, SOS_ID, EOS_ID, UNK_ID, PAD_TOK, SOS_TOK, EOS_TOK, UNK_TOK};
pub use wmd::{wmd, wmd_exact, WMD_EXACT_MAX_LEN};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("configuration error: {0}")]
    Config(String),
}

/// Whether an utterance is natural language or grammar-generated pseudo-language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UtteranceKind {
    Natural,
    Canonical,
}

impl UtteranceKind {
    pub fn opposite(self) -> Self {
        match self {
            UtteranceKind::Natural => UtteranceKind::Canonical,
            UtteranceKind::Canonical => UtteranceKind::Natural,
        }
    }
}

/// A non-empty sequence of lowercase tokens tagged with its kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Utterance {
    tokens: Vec<String>,
    kind: UtteranceKind,
}

impl Utterance {
    /// Invariants: at least one token, no empty tokens.
    pub fn new(tokens: Vec<String>, kind: UtteranceKind) -> Self {
        assert!(!tokens.is_empty(), "utterance must have at least one token");
        debug_assert!(tokens.iter().all(|t| !t.is_empty()), "empty token");
        Utterance { tokens, kind }
    }

    /// Whitespace tokenization of lowercase-normalized text. `None` on blank input.
    pub fn parse(text: &str, kind: UtteranceKind) -> Option<Self> {
        let tokens: Vec<String> = text
            .split_whitespace()
            .map(|t| t.to_lowercase())
            .collect();
        if tokens.is_empty() {
            None
        } else {
            Some(Utterance { tokens, kind })
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn kind(&self) -> UtteranceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn with_kind(&self, kind: UtteranceKind) -> Self {
        Utterance { tokens: self.tokens.clone(), kind }
    }
}

impl std::fmt::Display for Utterance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text())
    }
}
