//! Two-stage semantic parsing without parallel supervision.
//!
//! The pipeline maps a natural-language utterance to a canonical utterance
//! with a dual paraphrase model (one shared encoder, two attention decoders),
//! then maps the canonical utterance to an executable logical form with a
//! supervised sequence-to-sequence parser trained on grammar-generated pairs.
//! The paraphrase model is trained without any (natural, canonical) pairs:
//! denoising auto-encoding for initialization, then back-translation and
//! policy-gradient cycle learning driven by frozen auxiliary models.
//!
//! Module map:
//! - [`domain`]: synthetic executable domain (grammar, logical forms, executor,
//!   naturalizer, corpus construction)
//! - [`textstats`]: tokenized utterances, vocabularies, BLEU, Word Mover's Distance
//! - [`noise`]: the three corruption channels for the denoising task
//! - [`net`]: differentiable sequence primitives (LSTM, attention, CNN, tape autodiff)
//! - [`zoo`]: concrete model assembly, persistence, freezing
//! - [`reward`]: fluency / style / relevance rewards and the mean baseline
//! - [`train`]: pre-training and cycle-learning procedures
//! - [`evalsuite`]: denotation-level evaluation, baselines, ablation runners
//! - [`harness`]: configuration, seeding, run orchestration

pub mod domain;
pub mod evalsuite;
pub mod harness;
pub mod net;
pub mod noise;
pub mod reward;
pub mod textstats;
pub mod train;
pub mod zoo;
