//! JSON monoid files.
//!
//! ```json
//! {"kind": "builtin", "name": "powerset", "ground": [1, 2, 3]}
//! {"kind": "numerical-semigroup", "generators": [3, 5]}
//! {"kind": "finite", "elements": ["0", "1"], "zero": "0", "add": [["0", "1"], ["1", "1"]]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Family, MonoidRef};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonoidFile {
    Builtin {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ground: Option<Vec<Value>>,
        /// Only for `truncated-powerset`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
    },
    NumericalSemigroup {
        generators: Vec<u64>,
    },
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        elements: Vec<Value>,
        zero: Value,
        add: Vec<Vec<Value>>,
    },
}

fn scalar(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(Error::Format(format!("expected a string or number, found {other}"))),
    }
}

impl MonoidFile {
    pub fn build(&self) -> Result<MonoidRef> {
        match self {
            MonoidFile::Builtin { name, ground, k } => match name.as_str() {
                "boolean" => Ok(MonoidRef::boolean()),
                "bag" => Ok(MonoidRef::bag()),
                "fuzzy-max" => Ok(MonoidRef::fuzzy_max()),
                "nonneg-real" => Ok(MonoidRef::nonneg_real()),
                "min-tropical" => Ok(MonoidRef::min_tropical()),
                "powerset" => {
                    let ground = ground
                        .as_ref()
                        .ok_or_else(|| Error::Format("powerset needs a \"ground\" list".into()))?;
                    let names = ground.iter().map(scalar).collect::<Result<Vec<_>>>()?;
                    MonoidRef::powerset(&names)
                }
                "n2" => Ok(MonoidRef::n2()),
                "truncated-powerset" => MonoidRef::truncated_powerset(
                    k.ok_or_else(|| Error::Format("truncated-powerset needs \"k\"".into()))?,
                ),
                other => Err(Error::Format(format!("unknown builtin monoid {other:?}"))),
            },
            MonoidFile::NumericalSemigroup { generators } => {
                MonoidRef::numerical_semigroup(generators)
            }
            MonoidFile::Finite {
                name,
                elements,
                zero,
                add,
            } => {
                let elements = elements.iter().map(scalar).collect::<Result<Vec<_>>>()?;
                let add = add
                    .iter()
                    .map(|row| row.iter().map(scalar).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let table = super::FiniteTable::validate(&elements, &add, &scalar(zero)?)
                    .map_err(|v| Error::InvalidTable(v.to_string()))?;
                Ok(MonoidRef::from_table(table, name.clone()))
            }
        }
    }

    /// File form of a monoid; finite tables are always written out in full.
    pub fn describe(m: &MonoidRef) -> MonoidFile {
        let builtin = |name: &str| MonoidFile::Builtin {
            name: name.to_string(),
            ground: None,
            k: None,
        };
        match m.family() {
            Family::Boolean => builtin("boolean"),
            Family::Bag => builtin("bag"),
            Family::FuzzyMax => builtin("fuzzy-max"),
            Family::NonnegReal => builtin("nonneg-real"),
            Family::MinTropical => builtin("min-tropical"),
            Family::Powerset { ground } => MonoidFile::Builtin {
                name: "powerset".into(),
                ground: Some(ground.iter().cloned().map(Value::String).collect()),
                k: None,
            },
            Family::Numerical(s) => MonoidFile::NumericalSemigroup {
                generators: s.generators().to_vec(),
            },
            Family::Finite(t) => MonoidFile::Finite {
                name: m.label.clone(),
                elements: t.names().iter().cloned().map(Value::String).collect(),
                zero: Value::String(t.names()[t.zero_index() as usize].clone()),
                add: t
                    .name_table()
                    .into_iter()
                    .map(|row| row.into_iter().map(Value::String).collect())
                    .collect(),
            },
        }
    }
}

impl MonoidRef {
    pub fn from_json(text: &str) -> Result<MonoidRef> {
        let file: MonoidFile = serde_json::from_str(text)?;
        file.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MonoidRef> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MonoidFile::describe(self)).expect("monoid files serialize")
    }
}
