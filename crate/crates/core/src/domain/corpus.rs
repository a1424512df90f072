//! Corpus construction: splits grammar pairs into evaluation and training
//! material, manufactures the unpaired natural/canonical corpora, and speaks
//! the JSONL dataset format.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::exec::{execute, Denotation};
use super::lf::LogicalForm;
use super::naturalize::{naturalize, RewriteRule};
use super::Database;
use crate::textstats::{Utterance, UtteranceKind};

/// An aligned (natural, canonical, logical form) triple. Used only for
/// evaluation and the semi-supervised labeled fraction, never in the
/// unsupervised phases.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldPair {
    pub natural: Utterance,
    pub canonical: Utterance,
    pub lf: LogicalForm,
}

/// Output of [`build_corpora`]: unpaired corpora plus aligned pools.
#[derive(Debug, Clone)]
pub struct CorpusBundle {
    /// Natural-language utterances, pairing discarded.
    pub natural: Vec<Utterance>,
    /// Canonical utterances, pairing discarded.
    pub canonical: Vec<Utterance>,
    /// Held-out gold pairs for evaluation.
    pub eval: Vec<GoldPair>,
    /// Train-side gold pairs available to semi-supervised mixing.
    pub semi_pool: Vec<GoldPair>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad jsonl record at line {line}: {msg}")]
    BadRecord { line: usize, msg: String },
}

/// Builds the unsupervised corpora and the gold splits.
///
/// The split unit is the logical form: all paraphrases of one form land on
/// the same side, so no eval utterance can leak into training through a
/// paraphrase twin. The eval side takes `floor(eval_fraction * n)` forms
/// (at least one); pairs whose execution errors on `db` are dropped first
/// so every gold pair executes cleanly.
pub fn build_corpora(
    pairs: &[(Utterance, LogicalForm)],
    rules: &[RewriteRule],
    db: &Database,
    paraphrases_per_canonical: usize,
    eval_fraction: f64,
    rng: &mut impl Rng,
) -> Result<CorpusBundle, CorpusError> {
    if !(eval_fraction > 0.0 && eval_fraction < 1.0) {
        return Err(CorpusError::Config(format!(
            "eval_fraction must be in (0, 1), got {eval_fraction}"
        )));
    }
    let clean: Vec<&(Utterance, LogicalForm)> = pairs
        .iter()
        .filter(|(_, lf)| !execute(lf, db).is_error())
        .collect();
    if clean.is_empty() {
        return Err(CorpusError::Config(
            "no executable pairs: nothing to split".into(),
        ));
    }
    let eval_count = ((eval_fraction * clean.len() as f64).floor() as usize).max(1);
    if eval_count >= clean.len() {
        return Err(CorpusError::Config(format!(
            "eval split of {eval_count} leaves no training pairs"
        )));
    }

    let mut order: Vec<usize> = (0..clean.len()).collect();
    order.shuffle(rng);
    let eval_idx: std::collections::BTreeSet<usize> =
        order[..eval_count].iter().copied().collect();

    let mut eval = Vec::new();
    let mut semi_pool = Vec::new();
    let mut natural = Vec::new();
    let mut canonical = Vec::new();

    for (i, (canon, lf)) in clean.iter().enumerate() {
        if eval_idx.contains(&i) {
            let nat = naturalize(canon, rules, rng);
            eval.push(GoldPair { natural: nat, canonical: canon.clone(), lf: lf.clone() });
        } else {
            let mut paras = Vec::new();
            for _ in 0..paraphrases_per_canonical {
                paras.push(naturalize(canon, rules, rng));
            }
            semi_pool.push(GoldPair {
                natural: paras[0].clone(),
                canonical: canon.clone(),
                lf: lf.clone(),
            });
            natural.extend(paras);
            canonical.push(canon.clone());
        }
    }

    // Corpus hygiene: nothing from the eval split may appear verbatim in the
    // unsupervised corpora.
    let eval_texts: std::collections::HashSet<String> = eval
        .iter()
        .flat_map(|g| [g.natural.text(), g.canonical.text()])
        .collect();
    natural.retain(|u| !eval_texts.contains(&u.text()));
    canonical.retain(|u| !eval_texts.contains(&u.text()));

    // Discard any residual pairing through position.
    natural.shuffle(rng);
    canonical.shuffle(rng);

    Ok(CorpusBundle { natural, canonical, eval, semi_pool })
}

/// One line of the JSONL dataset format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataRecord {
    pub kind: RecordKind,
    /// Space-joined tokens (the natural side for `pair` records).
    pub tokens: String,
    /// The canonical side of a `pair` record.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denotation: Option<Denotation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Natural,
    Canonical,
    Pair,
}

pub fn write_utterances(path: &Path, us: &[Utterance]) -> Result<(), CorpusError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for u in us {
        let rec = DataRecord {
            kind: match u.kind() {
                UtteranceKind::Natural => RecordKind::Natural,
                UtteranceKind::Canonical => RecordKind::Canonical,
            },
            tokens: u.text(),
            canonical: None,
            lf: None,
            denotation: None,
        };
        serde_json::to_writer(&mut f, &rec).map_err(std::io::Error::from)?;
        f.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_pairs(path: &Path, pairs: &[GoldPair], db: &Database) -> Result<(), CorpusError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for g in pairs {
        let rec = DataRecord {
            kind: RecordKind::Pair,
            tokens: g.natural.text(),
            canonical: Some(g.canonical.text()),
            lf: Some(g.lf.serialize()),
            denotation: Some(execute(&g.lf, db)),
        };
        serde_json::to_writer(&mut f, &rec).map_err(std::io::Error::from)?;
        f.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_utterances(path: &Path, kind: UtteranceKind) -> Result<Vec<Utterance>, CorpusError> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: DataRecord = serde_json::from_str(&line)
            .map_err(|e| CorpusError::BadRecord { line: i + 1, msg: e.to_string() })?;
        let u = Utterance::parse(&rec.tokens, kind).ok_or(CorpusError::BadRecord {
            line: i + 1,
            msg: "empty tokens".into(),
        })?;
        out.push(u);
    }
    Ok(out)
}

pub fn read_pairs(path: &Path) -> Result<Vec<GoldPair>, CorpusError> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: DataRecord = serde_json::from_str(&line)
            .map_err(|e| CorpusError::BadRecord { line: i + 1, msg: e.to_string() })?;
        let bad = |msg: &str| CorpusError::BadRecord { line: i + 1, msg: msg.into() };
        if rec.kind != RecordKind::Pair {
            return Err(bad("expected kind=pair"));
        }
        let natural = Utterance::parse(&rec.tokens, UtteranceKind::Natural)
            .ok_or_else(|| bad("empty tokens"))?;
        let canonical = rec
            .canonical
            .as_deref()
            .and_then(|c| Utterance::parse(c, UtteranceKind::Canonical))
            .ok_or_else(|| bad("missing canonical"))?;
        let lf = rec
            .lf
            .as_deref()
            .ok_or_else(|| bad("missing lf"))
            .and_then(|s| {
                LogicalForm::parse(s).map_err(|e| bad(&format!("bad lf: {e}")))
            })?;
        out.push(GoldPair { natural, canonical, lf });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::db::default_database;
    use crate::domain::grammar::{default_grammar, enumerate_pairs, DEFAULT_DEPTH};
    use crate::domain::naturalize::default_rules;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixture() -> (Vec<(Utterance, LogicalForm)>, Database) {
        (
            enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap(),
            default_database(),
        )
    }
    use crate::domain::db::Database;

    #[test]
    fn paraphrase_ratio_roughly_eight() {
        let (pairs, db) = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = build_corpora(&pairs, &default_rules(), &db, 8, 0.2, &mut rng).unwrap();
        let ratio = b.natural.len() as f64 / b.canonical.len() as f64;
        assert!(
            (ratio - 8.0).abs() < 0.5,
            "|X|/|Z| = {ratio}, expected about 8"
        );
    }

    #[test]
    fn floor_rounding_on_ten_pairs() {
        let (pairs, db) = fixture();
        let ten = &pairs[..10];
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let b = build_corpora(ten, &default_rules(), &db, 2, 0.99, &mut rng).unwrap();
        assert_eq!(b.eval.len(), 9);
        assert_eq!(b.semi_pool.len(), 1);
    }

    #[test]
    fn eval_and_train_forms_disjoint() {
        let (pairs, db) = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = build_corpora(&pairs, &default_rules(), &db, 4, 0.2, &mut rng).unwrap();
        let eval_lfs: std::collections::HashSet<String> =
            b.eval.iter().map(|g| g.lf.serialize()).collect();
        for g in &b.semi_pool {
            assert!(!eval_lfs.contains(&g.lf.serialize()));
        }
        // hygiene: no eval utterance appears verbatim in X or Z
        let eval_texts: std::collections::HashSet<String> = b
            .eval
            .iter()
            .flat_map(|g| [g.natural.text(), g.canonical.text()])
            .collect();
        for u in b.natural.iter().chain(&b.canonical) {
            assert!(!eval_texts.contains(&u.text()), "leaked: {u}");
        }
    }

    #[test]
    fn gold_pairs_execute_cleanly() {
        let (pairs, db) = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let b = build_corpora(&pairs, &default_rules(), &db, 2, 0.2, &mut rng).unwrap();
        for g in b.eval.iter().chain(&b.semi_pool) {
            assert!(!execute(&g.lf, &db).is_error(), "gold pair errors: {}", g.canonical);
        }
    }

    #[test]
    fn bad_fraction_rejected() {
        let (pairs, db) = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(build_corpora(&pairs, &default_rules(), &db, 2, 0.0, &mut rng).is_err());
        assert!(build_corpora(&pairs, &default_rules(), &db, 2, 1.0, &mut rng).is_err());
    }

    #[test]
    fn jsonl_roundtrip() {
        let (pairs, db) = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let b = build_corpora(&pairs[..40], &default_rules(), &db, 2, 0.2, &mut rng).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let xp = dir.path().join("x.jsonl");
        let pp = dir.path().join("eval.jsonl");
        write_utterances(&xp, &b.natural).unwrap();
        write_pairs(&pp, &b.eval, &db).unwrap();
        let xs = read_utterances(&xp, UtteranceKind::Natural).unwrap();
        assert_eq!(xs, b.natural);
        let ps = read_pairs(&pp).unwrap();
        assert_eq!(ps.len(), b.eval.len());
        assert_eq!(ps[0].lf, b.eval[0].lf);
    }
}
