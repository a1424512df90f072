//! Token embedding table used for model initialization and WMD.
//!
//! By default every token gets a uniform random vector in [-0.2, 0.2]. An
//! optional plain-text file ("token v1 .. vD", one token per line) overrides
//! rows for the tokens it covers; everything else keeps the random fallback.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;

use super::TextError;

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    /// Random-init table over `tokens`. The `<unk>` row is always present so
    /// any token resolves.
    pub fn random_init(tokens: &[String], dim: usize, rng: &mut impl Rng) -> Self {
        let mut vectors = HashMap::new();
        for t in tokens {
            vectors.insert(t.clone(), random_vec(dim, rng));
        }
        vectors
            .entry(super::UNK_TOK.to_string())
            .or_insert_with(|| random_vec(dim, rng));
        EmbeddingTable { dim, vectors }
    }

    /// Like [`random_init`], but rows found in the embedding file replace the
    /// random vectors exactly.
    ///
    /// File format: UTF-8 lines, token followed by `dim` space-separated
    /// decimals. A row of the wrong width is a configuration error naming the
    /// token.
    pub fn with_file(
        tokens: &[String],
        dim: usize,
        path: &Path,
        rng: &mut impl Rng,
    ) -> Result<Self, TextError> {
        let mut table = Self::random_init(tokens, dim, rng);
        let text = std::fs::read_to_string(path)
            .map_err(|e| TextError::Config(format!("cannot read embeddings {path:?}: {e}")))?;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tok = parts.next().unwrap().to_string();
            let vals: Result<Vec<f64>, _> = parts.map(|v| v.parse::<f64>()).collect();
            let vals = vals.map_err(|e| {
                TextError::Config(format!("embeddings line {}: bad number: {e}", lineno + 1))
            })?;
            if vals.len() != dim {
                return Err(TextError::Config(format!(
                    "embeddings token `{tok}`: dimension {} does not match configured {dim}",
                    vals.len()
                )));
            }
            // Only tokens we actually use are kept.
            if table.vectors.contains_key(&tok) {
                table.vectors.insert(tok, vals);
            }
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vectors.contains_key(token)
    }

    /// Every token resolves: unknown tokens fall back to the `<unk>` row.
    pub fn vector(&self, token: &str) -> &[f64] {
        self.vectors
            .get(token)
            .unwrap_or_else(|| &self.vectors[super::UNK_TOK])
    }

    pub fn euclidean(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 0.0;
        }
        let va = self.vector(a);
        let vb = self.vector(b);
        va.iter()
            .zip(vb)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

fn random_vec(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-0.2..=0.2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_init_in_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = EmbeddingTable::random_init(&["a".into(), "b".into()], 16, &mut rng);
        for tok in ["a", "b", "<unk>"] {
            assert!(t.vector(tok).iter().all(|v| (-0.2..=0.2).contains(v)));
        }
    }

    #[test]
    fn unknown_token_resolves_to_unk() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = EmbeddingTable::random_init(&["a".into()], 8, &mut rng);
        assert_eq!(t.vector("never-seen"), t.vector("<unk>"));
    }

    #[test]
    fn file_rows_override_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("emb.txt");
        std::fs::write(&p, "a 1.0 2.0 3.0\nzzz 9 9 9\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = EmbeddingTable::with_file(&["a".into(), "b".into()], 3, &p, &mut rng).unwrap();
        assert_eq!(t.vector("a"), &[1.0, 2.0, 3.0]);
        // "zzz" is not in the token list, so it is ignored
        assert!(!t.contains("zzz"));
    }

    #[test]
    fn wrong_width_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("emb.txt");
        std::fs::write(&p, "a 1.0 2.0\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let err = EmbeddingTable::with_file(&["a".into()], 3, &p, &mut rng).unwrap_err();
        assert!(format!("{err}").contains("dimension"));
    }
}
