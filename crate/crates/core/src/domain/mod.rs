//! Synthetic executable domain: grammar, logical forms, executor, database,
//! naturalizer, and corpus construction.
//!
//! This module is the stand-in for an external grammar/execution toolchain:
//! it enumerates (canonical utterance, logical form) pairs from a small
//! basketball-flavored grammar, executes forms against an in-memory database,
//! and manufactures unpaired pseudo-natural utterances plus held-out gold
//! pairs for evaluation.

mod corpus;
mod db;
mod exec;
pub mod grammar;
mod lf;
pub mod naturalize;

pub use corpus::{
    build_corpora, read_pairs, read_utterances, write_pairs, write_utterances, CorpusBundle,
    CorpusError, DataRecord, GoldPair, RecordKind,
};
pub use db::{default_database, AttrSchema, AttrValue, Database, DbError, Entity, EntityType, RangeType};
pub use exec::{execute, Denotation, ExecError, ExecErrorKind};
pub use grammar::{default_grammar, enumerate_pairs, Grammar, GrammarError, GrammarRule, DEFAULT_DEPTH};
pub use lf::{CmpOp, LfParseError, LogicalForm, SuperDir, Value};
pub use naturalize::{default_rules, naturalize, RewriteRule};
