use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use super::{CuModel, Element, Poset, TableModel};
use crate::error::{Error, Result};
use crate::ext::ExtNat;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ModelFile {
    Table { elements: Vec<String>, add: Vec<Vec<String>>, leq: Vec<Vec<bool>> },
    Vector { dim: usize },
    Lsc(PosetFile),
}

#[derive(Deserialize)]
struct PosetFile {
    points: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

impl PosetFile {
    fn build(self) -> Result<Poset> {
        let idx = |n: &str| {
            self.points
                .iter()
                .position(|p| p == n)
                .ok_or_else(|| Error::Parse(format!("unknown point {n:?} in order")))
        };
        let pairs = self
            .order
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::new(self.points, &pairs)
    }
}

pub fn model_from_json(v: &Value) -> Result<CuModel> {
    let file: ModelFile = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    match file {
        ModelFile::Vector { dim } => {
            if dim == 0 {
                return Err(Error::Parse("vector dimension must be positive".into()));
            }
            Ok(CuModel::vector(dim))
        }
        ModelFile::Lsc(p) => Ok(CuModel::Lsc(p.build()?)),
        ModelFile::Table { elements, add, leq } => {
            let idx = |n: &str| {
                elements
                    .iter()
                    .position(|e| e == n)
                    .ok_or_else(|| Error::Parse(format!("unknown element {n:?} in addition table")))
            };
            let add = add
                .iter()
                .map(|row| row.iter().map(|n| idx(n)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(CuModel::Table(TableModel::new(elements, add, leq)?))
        }
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CuModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    model_from_json(&v)
}

fn load_poset(path: &str) -> Result<Poset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let mut v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("kind");
    }
    let p: PosetFile = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    p.build()
}

/// Resolves `vector:k`, `lsc:<poset file>` or a model file path.
pub fn model_from_spec(spec: &str) -> Result<CuModel> {
    if let Some(k) = spec.strip_prefix("vector:") {
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad vector dimension in {spec:?}")))?;
        if k == 0 {
            return Err(Error::Parse("vector dimension must be positive".into()));
        }
        return Ok(CuModel::vector(k));
    }
    if let Some(path) = spec.strip_prefix("lsc:") {
        return Ok(CuModel::Lsc(load_poset(path)?));
    }
    load_model(spec)
}

pub fn model_to_json(m: &CuModel) -> Value {
    match m {
        CuModel::Table(t) => json!({
            "kind": "table",
            "elements": t.names(),
            "add": t.add_table().iter().map(|r| r.iter().map(|&i| t.name(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "leq": t.leq_matrix(),
        }),
        CuModel::Vector(p) => json!({ "kind": "vector", "dim": p.len() }),
        CuModel::Lsc(p) => json!({
            "kind": "lsc",
            "points": p.names(),
            "order": p.strict_pairs().iter().map(|&(a, b)| [&p.names()[a], &p.names()[b]]).collect::<Vec<_>>(),
        }),
    }
}

impl CuModel {
    pub fn element_to_json(&self, x: &Element) -> Value {
        match (self, x) {
            (CuModel::Table(t), Element::Table(i)) => Value::String(t.name(*i).to_string()),
            _ => serde_json::to_value(x.coords().unwrap_or(&[])).expect("coordinates serialize"),
        }
    }

    pub fn parse_element(&self, v: &Value) -> Result<Element> {
        match self {
            CuModel::Table(t) => {
                let name = v.as_str().ok_or_else(|| Error::Parse(format!("expected an element name, got {v}")))?;
                t.index_of(name)
                    .map(Element::Table)
                    .ok_or_else(|| Error::Domain(format!("unknown element {name:?}")))
            }
            _ => {
                let coords: Vec<ExtNat> =
                    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("element literal {v}: {e}")))?;
                self.point(coords)
            }
        }
    }
}
