use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// The single output shape of every subcommand.
///
/// Maps are ordered, so identical inputs serialize byte-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: BTreeMap<String, Value>,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed,
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary.insert(key.to_string(), to_value(value));
        self
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Header plus one record per row; nested values are written as
    /// compact JSON. Summary and parameters are JSON-only.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(csv_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_layout() {
        let mut r = ExperimentReport::new("x", 1, &["lambda", "prob", "name"]);
        r.row(vec![json!([2, 1]), json!(0.5), json!("a")]);
        r.row(vec![json!([3]), json!(1e-20), Value::Null]);
        assert_eq!(r.to_csv(), "lambda,prob,name\n\"[2,1]\",0.5,a\n[3],1e-20,\n");
    }

    #[test]
    fn json_is_ordered() {
        let mut r = ExperimentReport::new("x", 7, &["a"]);
        r.param("zeta", 1).param("alpha", 2);
        let j = r.to_json();
        assert!(j.find("alpha").unwrap() < j.find("zeta").unwrap());
        assert!(j.ends_with("}\n"));
        let back: ExperimentReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }
}
