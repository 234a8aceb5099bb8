//! Report assembly. Every JSON report has `schema_version`, the command,
//! the prime, the seed and the budgets in effect.

use semibrick_core::matrix::Matrix;
use semibrick_core::{FieldSpec, Quiver};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, field: FieldSpec, seed: Option<u64>) -> Self {
        let mut fields = Map::new();
        fields.insert("schema_version".into(), json!(SCHEMA_VERSION));
        fields.insert("command".into(), json!(command));
        fields.insert("p".into(), json!(field.p()));
        if let Some(s) = seed {
            fields.insert("seed".into(), json!(s));
        }
        Report { fields }
    }

    pub fn budgets(mut self, budgets: &[(&str, usize)]) -> Self {
        let b: Map<String, Value> = budgets
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        self.fields.insert("budgets".into(), Value::Object(b));
        self
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.fields.insert(
            key.into(),
            serde_json::to_value(value).expect("report values serialize"),
        );
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.set(key, value);
        self
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string_pretty(&Value::Object(self.fields.clone())).unwrap()
                + "\n";
        }
        let width = self.fields.keys().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            if k == "schema_version" {
                continue;
            }
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out += &format!("{k:width$}  {shown}\n");
        }
        out
    }
}

/// Vertex-indexed maps as `{vertex: rows}`.
pub fn map_json(q: &Quiver, maps: &[Matrix]) -> Value {
    let obj: Map<String, Value> = q
        .vertices()
        .iter()
        .zip(maps)
        .map(|(v, m)| (v.clone(), json!(m.to_rows())))
        .collect();
    Value::Object(obj)
}
