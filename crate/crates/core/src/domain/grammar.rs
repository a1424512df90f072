//! Grammar rules and exhaustive (canonical utterance, logical form) pair
//! enumeration.
//!
//! The derivation depth bound limits how many times any single nonterminal
//! may appear along one root-to-leaf path, which keeps the recursive set
//! modifiers finite. Every full derivation yields exactly one canonical
//! utterance and one logical form; the bundled grammar guarantees the map
//! from canonical utterance to logical form is a function.

use std::collections::HashMap;

use thiserror::Error;

use super::db::EntityType;
use super::lf::{CmpOp, LogicalForm, SuperDir, Value};
use crate::textstats::{Utterance, UtteranceKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbol {
    Terminal(String),
    NonTerminal(String),
}

/// Intermediate value produced by a rule's semantic action.
#[derive(Debug, Clone, PartialEq)]
pub enum SemValue {
    Lf(LogicalForm),
    Attr(String),
    Num(i64),
    Sym(String),
}

/// How a rule assembles its logical-form value from the values of its
/// nonterminal children (in left-to-right rhs order).
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Pass through the single child value.
    Pass,
    /// Constant logical form (fully lexicalized rule).
    ConstLf(LogicalForm),
    /// `( type t )`
    TypeSet(EntityType),
    /// `( count child0 )`
    Count,
    /// children: [set, attr, num]
    FilterNum(CmpOp),
    /// children: [set, value]; attribute fixed by the rule
    FilterSym(String),
    /// children: [set, attr]
    Superlative(SuperDir),
    /// Constant attribute name
    AttrName(String),
    /// Constant integer
    NumConst(i64),
    /// Constant symbol (entity id or string literal)
    SymConst(String),
}

#[derive(Debug, Clone)]
pub struct GrammarRule {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
    pub action: Action,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub start: String,
    pub rules: Vec<GrammarRule>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("nonterminal `{0}` is unreachable: no production defines it")]
    UndefinedNonterminal(String),
    #[error("canonical utterance `{0}` derives two distinct logical forms")]
    AmbiguousCanonical(String),
    #[error("rule for `{0}` produced a non-logical-form value at the start symbol")]
    BadStartValue(String),
}

/// Builds a rule from a compact rhs spec: whitespace-separated tokens where
/// ALL-CAPS tokens (with underscores) name nonterminals and everything else
/// is a terminal.
pub fn rule(lhs: &str, rhs: &str, action: Action) -> GrammarRule {
    let rhs = rhs
        .split_whitespace()
        .map(|t| {
            if t.chars().all(|c| c.is_ascii_uppercase() || c == '_') {
                Symbol::NonTerminal(t.to_string())
            } else {
                Symbol::Terminal(t.to_string())
            }
        })
        .collect();
    GrammarRule { lhs: lhs.to_string(), rhs, action }
}

impl Grammar {
    fn validate(&self) -> Result<(), GrammarError> {
        let defined: std::collections::HashSet<&str> =
            self.rules.iter().map(|r| r.lhs.as_str()).collect();
        if !defined.contains(self.start.as_str()) {
            return Err(GrammarError::UndefinedNonterminal(self.start.clone()));
        }
        for r in &self.rules {
            for s in &r.rhs {
                if let Symbol::NonTerminal(nt) = s {
                    if !defined.contains(nt.as_str()) {
                        return Err(GrammarError::UndefinedNonterminal(nt.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Enumerates every distinct derivation up to `depth_bound`, returning pairs
/// sorted lexicographically by serialized logical form.
pub fn enumerate_pairs(
    grammar: &Grammar,
    depth_bound: usize,
) -> Result<Vec<(Utterance, LogicalForm)>, GrammarError> {
    grammar.validate()?;
    let mut by_lhs: HashMap<&str, Vec<&GrammarRule>> = HashMap::new();
    for r in &grammar.rules {
        by_lhs.entry(r.lhs.as_str()).or_default().push(r);
    }
    let counts: HashMap<String, usize> = HashMap::new();
    let derivations = expand(&grammar.start, &by_lhs, &counts, depth_bound);

    let mut seen: HashMap<String, LogicalForm> = HashMap::new();
    let mut pairs: Vec<(Utterance, LogicalForm)> = Vec::new();
    for (tokens, value) in derivations {
        let SemValue::Lf(lf) = value else {
            return Err(GrammarError::BadStartValue(grammar.start.clone()));
        };
        let text = tokens.join(" ");
        match seen.get(&text) {
            Some(prev) if *prev != lf => {
                return Err(GrammarError::AmbiguousCanonical(text));
            }
            Some(_) => continue, // duplicate derivation of the same pair
            None => {
                seen.insert(text, lf.clone());
                pairs.push((Utterance::new(tokens, UtteranceKind::Canonical), lf));
            }
        }
    }
    pairs.sort_by(|a, b| a.1.serialize().cmp(&b.1.serialize()));
    Ok(pairs)
}

fn expand(
    nt: &str,
    by_lhs: &HashMap<&str, Vec<&GrammarRule>>,
    counts: &HashMap<String, usize>,
    bound: usize,
) -> Vec<(Vec<String>, SemValue)> {
    let used = counts.get(nt).copied().unwrap_or(0);
    if used >= bound {
        return Vec::new();
    }
    let mut counts = counts.clone();
    counts.insert(nt.to_string(), used + 1);

    let mut out = Vec::new();
    let Some(rules) = by_lhs.get(nt) else { return out };
    for r in rules {
        // Cartesian product over nonterminal children; terminals are fixed.
        let mut partial: Vec<(Vec<String>, Vec<SemValue>)> = vec![(Vec::new(), Vec::new())];
        for sym in &r.rhs {
            match sym {
                Symbol::Terminal(t) => {
                    for (toks, _) in &mut partial {
                        toks.push(t.clone());
                    }
                }
                Symbol::NonTerminal(child) => {
                    let subs = expand(child, by_lhs, &counts, bound);
                    let mut next = Vec::new();
                    for (toks, vals) in &partial {
                        for (stoks, sval) in &subs {
                            let mut t = toks.clone();
                            t.extend(stoks.iter().cloned());
                            let mut v = vals.clone();
                            v.push(sval.clone());
                            next.push((t, v));
                        }
                    }
                    partial = next;
                }
            }
        }
        for (toks, vals) in partial {
            if let Some(v) = apply_action(&r.action, &vals) {
                out.push((toks, v));
            }
        }
    }
    out
}

fn apply_action(action: &Action, children: &[SemValue]) -> Option<SemValue> {
    let set = |v: &SemValue| match v {
        SemValue::Lf(lf) => Some(lf.clone()),
        _ => None,
    };
    Some(match action {
        Action::Pass => children[0].clone(),
        Action::ConstLf(lf) => SemValue::Lf(lf.clone()),
        Action::TypeSet(t) => SemValue::Lf(LogicalForm::Type(t.name().to_string())),
        Action::Count => SemValue::Lf(LogicalForm::Count(Box::new(set(&children[0])?))),
        Action::FilterNum(cmp) => {
            let (SemValue::Attr(attr), SemValue::Num(n)) = (&children[1], &children[2]) else {
                return None;
            };
            SemValue::Lf(LogicalForm::Filter {
                set: Box::new(set(&children[0])?),
                attr: attr.clone(),
                cmp: *cmp,
                value: Value::Int(*n),
            })
        }
        Action::FilterSym(attr) => {
            let SemValue::Sym(s) = &children[1] else { return None };
            SemValue::Lf(LogicalForm::Filter {
                set: Box::new(set(&children[0])?),
                attr: attr.clone(),
                cmp: CmpOp::Eq,
                value: Value::Sym(s.clone()),
            })
        }
        Action::Superlative(dir) => {
            let SemValue::Attr(attr) = &children[1] else { return None };
            SemValue::Lf(LogicalForm::Superlative {
                attr: attr.clone(),
                dir: *dir,
                set: Box::new(set(&children[0])?),
            })
        }
        Action::AttrName(a) => SemValue::Attr(a.clone()),
        Action::NumConst(n) => SemValue::Num(*n),
        Action::SymConst(s) => SemValue::Sym(s.clone()),
    })
}

/// The bundled grammar: recursive player-set modifiers over the default
/// database, plus bare and counted team/player sets.
pub fn default_grammar() -> Grammar {
    use Action::*;
    let rules = vec![
        rule("S", "Q_PLAYER", Pass),
        rule("S", "Q_TEAM", Pass),
        rule("S", "number of Q_PLAYER", Count),
        rule("S", "number of Q_TEAM", Count),
        rule("Q_TEAM", "team", TypeSet(EntityType::Team)),
        rule("Q_PLAYER", "player", TypeSet(EntityType::Player)),
        rule(
            "Q_PLAYER",
            "Q_PLAYER whose NUM_ATTR is at least NUM_VAL",
            FilterNum(CmpOp::Ge),
        ),
        rule(
            "Q_PLAYER",
            "Q_PLAYER whose NUM_ATTR is at most NUM_VAL",
            FilterNum(CmpOp::Le),
        ),
        rule(
            "Q_PLAYER",
            "Q_PLAYER whose position is POSITION",
            FilterSym("position".into()),
        ),
        rule(
            "Q_PLAYER",
            "Q_PLAYER that plays for TEAM_NAME",
            FilterSym("plays_for".into()),
        ),
        rule(
            "Q_PLAYER",
            "Q_PLAYER that has the largest NUM_ATTR",
            Superlative(SuperDir::Max),
        ),
        rule(
            "Q_PLAYER",
            "Q_PLAYER that has the smallest NUM_ATTR",
            Superlative(SuperDir::Min),
        ),
        rule("NUM_ATTR", "number of steals", AttrName("num_steals".into())),
        rule("NUM_ATTR", "number of points", AttrName("num_points".into())),
        rule("NUM_VAL", "3", NumConst(3)),
        rule("POSITION", "guard", SymConst("guard".into())),
        rule("POSITION", "center", SymConst("center".into())),
        rule("TEAM_NAME", "lakers", SymConst("lakers".into())),
        rule("TEAM_NAME", "celtics", SymConst("celtics".into())),
    ];
    Grammar { start: "S".into(), rules }
}

/// Default derivation depth for the bundled grammar (up to two stacked
/// set modifiers).
pub const DEFAULT_DEPTH: usize = 3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lexicalized_rule() {
        let g = Grammar {
            start: "S".into(),
            rules: vec![rule(
                "S",
                "number of team",
                Action::ConstLf(LogicalForm::Count(Box::new(LogicalForm::Type(
                    "team".into(),
                )))),
            )],
        };
        let pairs = enumerate_pairs(&g, 3).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0.text(), "number of team");
        assert_eq!(pairs[0].1.serialize(), "( count ( type team ) )");
    }

    #[test]
    fn depth_zero_gives_nothing() {
        let pairs = enumerate_pairs(&default_grammar(), 0).unwrap();
        assert!(pairs.is_empty());
    }

    /// Independent hand count of the bundled grammar at depth 3.
    ///
    /// Player-set modifiers: 2 numeric attrs x {at least, at most} x 1 value
    /// = 4, positions = 2, teams = 2, superlatives = 2 dirs x 2 attrs = 4,
    /// so m = 12. Player sets with at most two stacked modifiers:
    /// 1 + m + m^2 = 157; plus the bare team set = 158 sets; each set also
    /// appears under "number of", giving 316 pairs.
    #[test]
    fn default_grammar_depth3_count_matches_hand_count() {
        let m = 2 * 2 * 1 + 2 + 2 + 2 * 2;
        let sets = (1 + m + m * m) + 1;
        let expected = 2 * sets;
        assert_eq!(expected, 316);
        let pairs = enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap();
        assert_eq!(pairs.len(), expected);
    }

    #[test]
    fn canonical_to_lf_is_a_function() {
        let pairs = enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap();
        let mut seen: HashMap<String, &LogicalForm> = HashMap::new();
        for (u, lf) in &pairs {
            if let Some(prev) = seen.insert(u.text(), lf) {
                assert_eq!(prev, lf, "canonical `{u}` maps to two forms");
            }
        }
    }

    #[test]
    fn deterministic_order_and_roundtrip() {
        let a = enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap();
        let b = enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap();
        assert_eq!(a.len(), b.len());
        for ((ua, la), (ub, lb)) in a.iter().zip(&b) {
            assert_eq!(ua, ub);
            assert_eq!(la, lb);
            // round-trip: parse(serialize(lf)) == lf
            assert_eq!(&LogicalForm::parse(&la.serialize()).unwrap(), la);
        }
        // sorted by serialized lf
        for w in a.windows(2) {
            assert!(w[0].1.serialize() <= w[1].1.serialize());
        }
    }

    #[test]
    fn undefined_nonterminal_is_named() {
        let g = Grammar {
            start: "S".into(),
            rules: vec![rule("S", "GHOST", Action::Pass)],
        };
        assert_eq!(
            enumerate_pairs(&g, 2).unwrap_err(),
            GrammarError::UndefinedNonterminal("GHOST".into())
        );
    }

    #[test]
    fn sample_canonical_surface_forms() {
        let pairs = enumerate_pairs(&default_grammar(), DEFAULT_DEPTH).unwrap();
        let texts: Vec<String> = pairs.iter().map(|(u, _)| u.text()).collect();
        assert!(texts.contains(&"number of team".to_string()));
        assert!(texts.contains(&"player whose number of steals is at least 3".to_string()));
        assert!(texts
            .contains(&"player that plays for lakers that has the largest number of points".to_string()));
    }
}
