//! Deterministic executor. Execution errors are values, not aborts: they feed
//! the 0/1 executability reward and count as mismatches during evaluation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::db::{AttrValue, Database, EntityType, RangeType};
use super::lf::{CmpOp, LogicalForm, Value};

/// Execution failure, carrying the serialized failing node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecError {
    pub kind: ExecErrorKind,
    /// Serialization of the node that failed.
    pub node: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecErrorKind {
    TypeMismatch,
    UnknownAttribute,
    UnknownType,
    EmptySuperlative,
}

impl std::fmt::Display for ExecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let k = match self.kind {
            ExecErrorKind::TypeMismatch => "type mismatch",
            ExecErrorKind::UnknownAttribute => "unknown attribute",
            ExecErrorKind::UnknownType => "unknown entity type",
            ExecErrorKind::EmptySuperlative => "superlative over empty set",
        };
        write!(f, "{k} at {}", self.node)
    }
}

/// Execution result: entity set, number, or error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Denotation {
    #[serde(rename = "set")]
    EntitySet(BTreeSet<String>),
    #[serde(rename = "num")]
    Num(i64),
    #[serde(rename = "error")]
    Error(ExecError),
}

impl Denotation {
    pub fn is_error(&self) -> bool {
        matches!(self, Denotation::Error(_))
    }

    /// Denotation-level agreement: set equality for entity sets, exact
    /// equality for integers. Errors never agree with anything, including
    /// other errors.
    pub fn agrees(&self, other: &Denotation) -> bool {
        match (self, other) {
            (Denotation::EntitySet(a), Denotation::EntitySet(b)) => a == b,
            (Denotation::Num(a), Denotation::Num(b)) => a == b,
            _ => false,
        }
    }
}

/// Executes a logical form against a database. Pure: equal inputs produce
/// equal denotations.
pub fn execute(lf: &LogicalForm, db: &Database) -> Denotation {
    match eval_set_or_num(lf, db) {
        Ok(d) => d,
        Err(e) => Denotation::Error(e),
    }
}

fn err(kind: ExecErrorKind, node: &LogicalForm) -> ExecError {
    ExecError { kind, node: node.serialize() }
}

fn eval_set_or_num(lf: &LogicalForm, db: &Database) -> Result<Denotation, ExecError> {
    match lf {
        LogicalForm::Count(inner) => {
            let set = eval_set(inner, db)?;
            Ok(Denotation::Num(set.len() as i64))
        }
        _ => Ok(Denotation::EntitySet(eval_set(lf, db)?)),
    }
}

fn eval_set(lf: &LogicalForm, db: &Database) -> Result<BTreeSet<String>, ExecError> {
    match lf {
        LogicalForm::Type(name) => {
            let ty = EntityType::from_name(name)
                .ok_or_else(|| err(ExecErrorKind::UnknownType, lf))?;
            Ok(db
                .entities()
                .iter()
                .filter(|e| e.ty == ty)
                .map(|e| e.id.clone())
                .collect())
        }
        LogicalForm::Filter { set, attr, cmp, value } => {
            let base = eval_set(set, db)?;
            let spec = db
                .attr_schema(attr)
                .ok_or_else(|| err(ExecErrorKind::UnknownAttribute, lf))?;
            let mut out = BTreeSet::new();
            for id in base {
                let ent = db.entity(&id).expect("set members exist");
                let Some(av) = ent.attrs.get(attr) else { continue };
                let keep = match (&spec.range, av, value, cmp) {
                    (RangeType::Int, AttrValue::Int(x), Value::Int(v), CmpOp::Eq) => x == v,
                    (RangeType::Int, AttrValue::Int(x), Value::Int(v), CmpOp::Ge) => x >= v,
                    (RangeType::Int, AttrValue::Int(x), Value::Int(v), CmpOp::Le) => x <= v,
                    (RangeType::EntityRef(_), AttrValue::Ref(x), Value::Sym(v), CmpOp::Eq) => {
                        x == v
                    }
                    (RangeType::Str, AttrValue::Str(x), Value::Sym(v), CmpOp::Eq) => x == v,
                    _ => return Err(err(ExecErrorKind::TypeMismatch, lf)),
                };
                if keep {
                    out.insert(id);
                }
            }
            Ok(out)
        }
        LogicalForm::Superlative { attr, dir, set } => {
            let base = eval_set(set, db)?;
            let spec = db
                .attr_schema(attr)
                .ok_or_else(|| err(ExecErrorKind::UnknownAttribute, lf))?;
            if !matches!(spec.range, RangeType::Int) {
                return Err(err(ExecErrorKind::TypeMismatch, lf));
            }
            let mut scored: Vec<(String, i64)> = Vec::new();
            for id in base {
                let ent = db.entity(&id).expect("set members exist");
                if let Some(AttrValue::Int(x)) = ent.attrs.get(attr) {
                    scored.push((id, *x));
                }
            }
            if scored.is_empty() {
                return Err(err(ExecErrorKind::EmptySuperlative, lf));
            }
            let best = match dir {
                super::lf::SuperDir::Max => scored.iter().map(|(_, x)| *x).max().unwrap(),
                super::lf::SuperDir::Min => scored.iter().map(|(_, x)| *x).min().unwrap(),
            };
            Ok(scored
                .into_iter()
                .filter(|(_, x)| *x == best)
                .map(|(id, _)| id)
                .collect())
        }
        LogicalForm::And(a, b) => {
            let sa = eval_set(a, db)?;
            let sb = eval_set(b, db)?;
            Ok(sa.intersection(&sb).cloned().collect())
        }
        LogicalForm::Count(_) => Err(err(ExecErrorKind::TypeMismatch, lf)),
    }
}
