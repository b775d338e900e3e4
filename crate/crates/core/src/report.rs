//! Serializable check reports shared by every exhaustive or sampled check.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::model::{CuModel, Element};

/// Named values in a fixed order, serialized as a JSON object in that order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tuple(pub Vec<(String, Value)>);

impl Tuple {
    pub fn new() -> Tuple {
        Tuple::default()
    }

    pub fn with(mut self, name: &str, value: Value) -> Tuple {
        self.0.push((name.to_string(), value));
        self
    }

    /// Builds a tuple of model elements.
    pub fn elements(m: &CuModel, named: &[(&str, &Element)]) -> Tuple {
        Tuple(named.iter().map(|(n, x)| (n.to_string(), m.element_to_json(x))).collect())
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl Serialize for Tuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// What a check quantified over.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scope {
    pub model: String,
    pub cap: Option<u64>,
    pub elements: usize,
}

impl Scope {
    pub fn new(m: &CuModel, cap: Option<u64>, elements: usize) -> Scope {
        Scope { model: m.describe(), cap: if m.is_pointwise() { cap } else { None }, elements }
    }
}

/// A hypothesis tuple with the witness found for it, or `None` if none exists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example {
    pub tuple: Tuple,
    pub witness: Option<Tuple>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub scope: Scope,
    pub tuples_checked: u64,
    pub failures: Vec<Tuple>,
    pub examples: Vec<Example>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: &str, scope: Scope) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            scope,
            tuples_checked: 0,
            failures: Vec::new(),
            examples: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn fail(&mut self, t: Tuple) {
        self.failures.push(t);
        self.pass = false;
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Marks the report as decided by its failure list.
    pub fn finish(mut self) -> CheckReport {
        self.pass = self.failures.is_empty();
        self
    }
}
