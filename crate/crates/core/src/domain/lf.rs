//! Logical forms: typed tree expressions over the domain schema, with a
//! parenthesized prefix token serialization that round-trips exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Comparison operator in attribute filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ge,
    Le,
}

impl CmpOp {
    pub fn token(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Le => "<=",
        }
    }
}

/// Direction of a superlative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuperDir {
    Max,
    Min,
}

impl SuperDir {
    pub fn token(self) -> &'static str {
        match self {
            SuperDir::Max => "max",
            SuperDir::Min => "min",
        }
    }
}

/// Attribute value literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Int(i64),
    /// Entity id or plain string constant; the schema decides which.
    Sym(String),
}

impl Value {
    fn token(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Sym(s) => s.clone(),
        }
    }
}

/// Expression tree. Set-valued nodes: `Type`, `Filter`, `Superlative`, `And`;
/// `Count` is integer-valued.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalForm {
    Type(String),
    Filter {
        set: Box<LogicalForm>,
        attr: String,
        cmp: CmpOp,
        value: Value,
    },
    Superlative {
        attr: String,
        dir: SuperDir,
        set: Box<LogicalForm>,
    },
    Count(Box<LogicalForm>),
    And(Box<LogicalForm>, Box<LogicalForm>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LfParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}` at position {1}")]
    Unexpected(String, usize),
    #[error("trailing tokens after position {0}")]
    Trailing(usize),
}

impl LogicalForm {
    /// Serializes to the prefix token sequence, e.g. `( count ( type team ) )`.
    pub fn to_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.write(&mut out);
        out
    }

    pub fn serialize(&self) -> String {
        self.to_tokens().join(" ")
    }

    fn write(&self, out: &mut Vec<String>) {
        let push = |out: &mut Vec<String>, s: &str| out.push(s.to_string());
        match self {
            LogicalForm::Type(t) => {
                push(out, "(");
                push(out, "type");
                push(out, t);
                push(out, ")");
            }
            LogicalForm::Filter { set, attr, cmp, value } => {
                push(out, "(");
                push(out, "filter");
                set.write(out);
                push(out, "(");
                push(out, cmp.token());
                push(out, attr);
                out.push(value.token());
                push(out, ")");
                push(out, ")");
            }
            LogicalForm::Superlative { attr, dir, set } => {
                push(out, "(");
                push(out, "superlative");
                push(out, attr);
                push(out, dir.token());
                set.write(out);
                push(out, ")");
            }
            LogicalForm::Count(set) => {
                push(out, "(");
                push(out, "count");
                set.write(out);
                push(out, ")");
            }
            LogicalForm::And(a, b) => {
                push(out, "(");
                push(out, "and");
                a.write(out);
                b.write(out);
                push(out, ")");
            }
        }
    }

    /// Parses a serialized logical form. Inverse of [`serialize`]:
    /// `parse(serialize(lf)) == lf` for every well-formed tree.
    pub fn parse(text: &str) -> Result<Self, LfParseError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        Self::parse_tokens(&tokens)
    }

    pub fn parse_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self, LfParseError> {
        let toks: Vec<&str> = tokens.iter().map(|s| s.as_ref()).collect();
        let mut pos = 0;
        let lf = parse_expr(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(LfParseError::Trailing(pos));
        }
        Ok(lf)
    }
}

fn expect<'a>(toks: &[&'a str], pos: &mut usize, tok: &str) -> Result<(), LfParseError> {
    match toks.get(*pos) {
        None => Err(LfParseError::UnexpectedEnd),
        Some(&t) if t == tok => {
            *pos += 1;
            Ok(())
        }
        Some(&t) => Err(LfParseError::Unexpected(t.to_string(), *pos)),
    }
}

fn next<'a>(toks: &[&'a str], pos: &mut usize) -> Result<&'a str, LfParseError> {
    let t = toks.get(*pos).ok_or(LfParseError::UnexpectedEnd)?;
    *pos += 1;
    Ok(t)
}

fn parse_expr(toks: &[&str], pos: &mut usize) -> Result<LogicalForm, LfParseError> {
    expect(toks, pos, "(")?;
    let head = next(toks, pos)?;
    let lf = match head {
        "type" => LogicalForm::Type(next(toks, pos)?.to_string()),
        "filter" => {
            let set = parse_expr(toks, pos)?;
            expect(toks, pos, "(")?;
            let cmp = match next(toks, pos)? {
                "=" => CmpOp::Eq,
                ">=" => CmpOp::Ge,
                "<=" => CmpOp::Le,
                other => return Err(LfParseError::Unexpected(other.to_string(), *pos - 1)),
            };
            let attr = next(toks, pos)?.to_string();
            let vt = next(toks, pos)?;
            let value = match vt.parse::<i64>() {
                Ok(n) => Value::Int(n),
                Err(_) => Value::Sym(vt.to_string()),
            };
            expect(toks, pos, ")")?;
            LogicalForm::Filter { set: Box::new(set), attr, cmp, value }
        }
        "superlative" => {
            let attr = next(toks, pos)?.to_string();
            let dir = match next(toks, pos)? {
                "max" => SuperDir::Max,
                "min" => SuperDir::Min,
                other => return Err(LfParseError::Unexpected(other.to_string(), *pos - 1)),
            };
            let set = parse_expr(toks, pos)?;
            LogicalForm::Superlative { attr, dir, set: Box::new(set) }
        }
        "count" => LogicalForm::Count(Box::new(parse_expr(toks, pos)?)),
        "and" => {
            let a = parse_expr(toks, pos)?;
            let b = parse_expr(toks, pos)?;
            LogicalForm::And(Box::new(a), Box::new(b))
        }
        other => return Err(LfParseError::Unexpected(other.to_string(), *pos - 1)),
    };
    expect(toks, pos, ")")?;
    Ok(lf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_forms() -> Vec<LogicalForm> {
        use LogicalForm::*;
        vec![
            Type("team".into()),
            Count(Box::new(Type("team".into()))),
            Filter {
                set: Box::new(Type("player".into())),
                attr: "num_steals".into(),
                cmp: CmpOp::Ge,
                value: Value::Int(3),
            },
            Superlative {
                attr: "num_points".into(),
                dir: SuperDir::Max,
                set: Box::new(Filter {
                    set: Box::new(Type("player".into())),
                    attr: "plays_for".into(),
                    cmp: CmpOp::Eq,
                    value: Value::Sym("lakers".into()),
                }),
            },
            And(
                Box::new(Type("player".into())),
                Box::new(Filter {
                    set: Box::new(Type("player".into())),
                    attr: "position".into(),
                    cmp: CmpOp::Eq,
                    value: Value::Sym("guard".into()),
                }),
            ),
        ]
    }

    #[test]
    fn serialization_shape() {
        let lf = LogicalForm::Count(Box::new(LogicalForm::Type("team".into())));
        assert_eq!(lf.serialize(), "( count ( type team ) )");
    }

    #[test]
    fn roundtrip_samples() {
        for lf in sample_forms() {
            let parsed = LogicalForm::parse(&lf.serialize()).unwrap();
            assert_eq!(parsed, lf);
        }
    }

    #[test]
    fn parse_failures() {
        assert!(LogicalForm::parse("( count ( type team )").is_err());
        assert!(LogicalForm::parse("( bogus x )").is_err());
        assert!(LogicalForm::parse("( type team ) trailing").is_err());
        assert!(LogicalForm::parse("").is_err());
    }
}
