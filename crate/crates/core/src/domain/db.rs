//! Entities, the attribute schema, and the bundled in-memory database.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Entity type in the bundled domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityType {
    Player,
    Team,
}

impl EntityType {
    pub fn name(self) -> &'static str {
        match self {
            EntityType::Player => "player",
            EntityType::Team => "team",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "player" => Some(EntityType::Player),
            "team" => Some(EntityType::Team),
            _ => None,
        }
    }
}

/// Attribute value attached to an entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttrValue {
    Int(i64),
    /// Reference to another entity by id.
    Ref(String),
    Str(String),
}

/// Range type of an attribute in the schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RangeType {
    Int,
    EntityRef(EntityType),
    Str,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    pub ty: EntityType,
    pub attrs: BTreeMap<String, AttrValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttrSchema {
    pub domain: EntityType,
    pub range: RangeType,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DbError {
    #[error("duplicate entity id `{0}`")]
    DuplicateId(String),
    #[error("entity `{entity}` carries attribute `{attr}` absent from the schema")]
    UnknownAttr { entity: String, attr: String },
    #[error("entity `{entity}` attribute `{attr}` has wrong value type")]
    WrongValueType { entity: String, attr: String },
    #[error("entity `{entity}` attribute `{attr}` references missing entity `{target}`")]
    DanglingRef { entity: String, attr: String, target: String },
}

/// Schema-closed entity collection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Database {
    entities: Vec<Entity>,
    schema: BTreeMap<String, AttrSchema>,
}

impl Database {
    /// Validates schema closure, id uniqueness, value types, and referential
    /// integrity of entity-reference attributes.
    pub fn new(
        entities: Vec<Entity>,
        schema: BTreeMap<String, AttrSchema>,
    ) -> Result<Self, DbError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &entities {
            if !seen.insert(e.id.clone()) {
                return Err(DbError::DuplicateId(e.id.clone()));
            }
        }
        for e in &entities {
            for (attr, val) in &e.attrs {
                let spec = schema.get(attr).ok_or_else(|| DbError::UnknownAttr {
                    entity: e.id.clone(),
                    attr: attr.clone(),
                })?;
                let ok = matches!(
                    (&spec.range, val),
                    (RangeType::Int, AttrValue::Int(_))
                        | (RangeType::EntityRef(_), AttrValue::Ref(_))
                        | (RangeType::Str, AttrValue::Str(_))
                );
                if !ok {
                    return Err(DbError::WrongValueType {
                        entity: e.id.clone(),
                        attr: attr.clone(),
                    });
                }
                if let AttrValue::Ref(target) = val {
                    if !seen.contains(target) {
                        return Err(DbError::DanglingRef {
                            entity: e.id.clone(),
                            attr: attr.clone(),
                            target: target.clone(),
                        });
                    }
                }
            }
        }
        Ok(Database { entities, schema })
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn schema(&self) -> &BTreeMap<String, AttrSchema> {
        &self.schema
    }

    pub fn attr_schema(&self, attr: &str) -> Option<&AttrSchema> {
        self.schema.get(attr)
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id == id)
    }
}

/// The bundled basketball-flavored database: 14 players across 4 teams.
pub fn default_database() -> Database {
    let mut schema = BTreeMap::new();
    schema.insert(
        "num_steals".to_string(),
        AttrSchema { domain: EntityType::Player, range: RangeType::Int },
    );
    schema.insert(
        "num_points".to_string(),
        AttrSchema { domain: EntityType::Player, range: RangeType::Int },
    );
    schema.insert(
        "plays_for".to_string(),
        AttrSchema { domain: EntityType::Player, range: RangeType::EntityRef(EntityType::Team) },
    );
    schema.insert(
        "position".to_string(),
        AttrSchema { domain: EntityType::Player, range: RangeType::Str },
    );

    let mut entities = Vec::new();
    for team in ["lakers", "celtics", "bulls", "rockets"] {
        entities.push(Entity {
            id: team.to_string(),
            ty: EntityType::Team,
            attrs: BTreeMap::new(),
        });
    }
    // (id, steals, points, team, position)
    let players: [(&str, i64, i64, &str, &str); 14] = [
        ("kobe", 4, 33, "lakers", "guard"),
        ("magic", 5, 22, "lakers", "guard"),
        ("kareem", 1, 28, "lakers", "center"),
        ("shaq", 0, 26, "lakers", "center"),
        ("bird", 3, 29, "celtics", "forward"),
        ("tatum", 2, 27, "celtics", "forward"),
        ("walton", 1, 14, "celtics", "center"),
        ("jordan", 6, 37, "bulls", "guard"),
        ("pippen", 4, 19, "bulls", "forward"),
        ("rodman", 2, 7, "bulls", "forward"),
        ("longley", 0, 9, "bulls", "center"),
        ("harden", 3, 31, "rockets", "guard"),
        ("olajuwon", 4, 24, "rockets", "center"),
        ("paul", 5, 18, "rockets", "guard"),
    ];
    for (id, steals, points, team, pos) in players {
        let mut attrs = BTreeMap::new();
        attrs.insert("num_steals".to_string(), AttrValue::Int(steals));
        attrs.insert("num_points".to_string(), AttrValue::Int(points));
        attrs.insert("plays_for".to_string(), AttrValue::Ref(team.to_string()));
        attrs.insert("position".to_string(), AttrValue::Str(pos.to_string()));
        entities.push(Entity { id: id.to_string(), ty: EntityType::Player, attrs });
    }
    Database::new(entities, schema).expect("bundled database is valid")
}
