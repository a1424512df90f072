//! Rule-based "naturalizer": manufactures natural-language-style paraphrases
//! of canonical utterances so the unsupervised corpora have the synonym and
//! word-order diversity that crowdsourced paraphrases would provide.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::textstats::{Utterance, UtteranceKind};

/// One element of a rewrite pattern: a literal token or a number wildcard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pat {
    Lit(&'static str),
    Num,
}

/// One element of a replacement: a literal token or the captured number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Out {
    Lit(&'static str),
    CapturedNum,
}

#[derive(Debug, Clone)]
pub enum RewriteRule {
    /// Replace the first occurrence of `pattern` with one of `choices`.
    Synonym { pattern: Vec<Pat>, choices: Vec<Vec<Out>> },
    /// Insert one of `words` at a random position.
    Insert { words: Vec<&'static str> },
    /// Delete the first occurrence of one of `words`.
    Delete { words: Vec<&'static str> },
    /// Rotate the utterance at the first occurrence of `pivot`: the tail
    /// (pivot dropped) moves to the front.
    Reorder { pivot: &'static str },
}

fn pat(words: &'static str) -> Vec<Pat> {
    words
        .split_whitespace()
        .map(|w| if w == "#" { Pat::Num } else { Pat::Lit(w) })
        .collect()
}

fn out(words: &'static str) -> Vec<Out> {
    words
        .split_whitespace()
        .map(|w| if w == "#" { Out::CapturedNum } else { Out::Lit(w) })
        .collect()
}

/// The bundled rewrite rules. `#` marks a number slot.
pub fn default_rules() -> Vec<RewriteRule> {
    use RewriteRule::*;
    vec![
        Synonym {
            pattern: pat("at least #"),
            choices: vec![out("# or more"), out("no fewer than #")],
        },
        Synonym {
            pattern: pat("at most #"),
            choices: vec![out("# or fewer"), out("no more than #")],
        },
        Synonym {
            pattern: pat("number of steals"),
            choices: vec![out("steals"), out("steal total")],
        },
        Synonym {
            pattern: pat("number of points"),
            choices: vec![out("points"), out("points scored")],
        },
        Synonym {
            pattern: pat("number of player"),
            choices: vec![out("how many players"), out("count of players")],
        },
        Synonym {
            pattern: pat("number of team"),
            choices: vec![out("how many teams"), out("count of teams")],
        },
        Synonym {
            pattern: pat("player whose"),
            choices: vec![out("who has a"), out("anyone whose")],
        },
        Synonym {
            pattern: pat("player that"),
            choices: vec![out("who"), out("somebody that")],
        },
        Synonym {
            pattern: pat("that plays for"),
            choices: vec![out("playing for"), out("on the"), out("suiting up for")],
        },
        Synonym {
            pattern: pat("whose position is"),
            choices: vec![out("playing"), out("listed as a")],
        },
        Synonym {
            pattern: pat("that has the largest"),
            choices: vec![out("with the most"), out("leading in")],
        },
        Synonym {
            pattern: pat("that has the smallest"),
            choices: vec![out("with the fewest"), out("lowest in")],
        },
        Insert { words: vec!["the", "please", "overall"] },
        Delete { words: vec!["is", "of", "that"] },
        Reorder { pivot: "whose" },
    ]
}

fn is_num(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_digit())
}

fn find_pattern(tokens: &[String], pattern: &[Pat]) -> Option<(usize, Option<String>)> {
    if pattern.is_empty() || tokens.len() < pattern.len() {
        return None;
    }
    'outer: for start in 0..=tokens.len() - pattern.len() {
        let mut captured = None;
        for (i, p) in pattern.iter().enumerate() {
            let tok = &tokens[start + i];
            match p {
                Pat::Lit(w) => {
                    if tok != w {
                        continue 'outer;
                    }
                }
                Pat::Num => {
                    if !is_num(tok) {
                        continue 'outer;
                    }
                    captured = Some(tok.clone());
                }
            }
        }
        return Some((start, captured));
    }
    None
}

/// Applies one rule if it matches; `None` when it does not apply.
fn apply_rule(tokens: &[String], r: &RewriteRule, rng: &mut impl Rng) -> Option<Vec<String>> {
    match r {
        RewriteRule::Synonym { pattern, choices } => {
            let (start, captured) = find_pattern(tokens, pattern)?;
            let choice = choices.choose(rng)?;
            let mut out: Vec<String> = tokens[..start].to_vec();
            for o in choice {
                match o {
                    Out::Lit(w) => out.push(w.to_string()),
                    Out::CapturedNum => out.push(captured.clone()?),
                }
            }
            out.extend_from_slice(&tokens[start + pattern.len()..]);
            if out.is_empty() {
                None
            } else {
                Some(out)
            }
        }
        RewriteRule::Insert { words } => {
            let w = words.choose(rng)?;
            let pos = rng.gen_range(0..=tokens.len());
            let mut out = tokens.to_vec();
            out.insert(pos, w.to_string());
            Some(out)
        }
        RewriteRule::Delete { words } => {
            if tokens.len() < 2 {
                return None; // never empty the utterance
            }
            let present: Vec<&&str> = words
                .iter()
                .filter(|w| tokens.iter().any(|t| t == **w))
                .collect();
            let w = present.choose(rng)?;
            let idx = tokens.iter().position(|t| t == **w).unwrap();
            let mut out = tokens.to_vec();
            out.remove(idx);
            Some(out)
        }
        RewriteRule::Reorder { pivot } => {
            let idx = tokens.iter().position(|t| t == pivot)?;
            if idx == 0 || idx + 1 >= tokens.len() {
                return None;
            }
            let mut out: Vec<String> = tokens[idx + 1..].to_vec();
            out.extend_from_slice(&tokens[..idx]);
            Some(out)
        }
    }
}

/// Rewrites a canonical utterance into a pseudo-natural one by applying
/// one to three matching rules in seeded random order. Falls back to the
/// unchanged input when no rule matches (or the rule set is empty).
pub fn naturalize(canonical: &Utterance, rules: &[RewriteRule], rng: &mut impl Rng) -> Utterance {
    let mut tokens: Vec<String> = canonical.tokens().to_vec();
    if !rules.is_empty() {
        let want = rng.gen_range(1..=3usize);
        let mut order: Vec<usize> = (0..rules.len()).collect();
        order.shuffle(rng);
        let mut applied = 0;
        for ri in order {
            if applied == want {
                break;
            }
            if let Some(next) = apply_rule(&tokens, &rules[ri], rng) {
                tokens = next;
                applied += 1;
            }
        }
    }
    Utterance::new(tokens, UtteranceKind::Natural)
}
