use serde_json::{Map, Value};

use crate::rational::format_rational;
use crate::toeplitz::BScalar;

/// One output row: `(query, word, entry, value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub query: String,
    pub word: Value,
    /// 1-based; absent for whole-query flags.
    pub entry: Option<usize>,
    pub value: String,
}

impl Row {
    pub fn flag(query: &str, word: Value, value: bool) -> Row {
        Row { query: query.into(), word, entry: None, value: value.to_string() }
    }

    fn to_json(&self) -> Value {
        serde_json::json!({
            "query": self.query,
            "word": self.word,
            "entry": self.entry,
            "value": self.value,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub query: String,
    pub rows: Vec<Row>,
    extras: Map<String, Value>,
}

impl Table {
    pub fn new(query: &str) -> Table {
        Table { query: query.into(), rows: Vec::new(), extras: Map::new() }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// One row per entry of `value`.
    pub fn push_scalar(&mut self, query: &str, word: &Value, value: &BScalar) {
        for (j, v) in value.entries().iter().enumerate() {
            self.rows.push(Row {
                query: query.into(),
                word: word.clone(),
                entry: Some(j + 1),
                value: format_rational(v),
            });
        }
    }

    pub fn extra(&mut self, key: &str, value: Value) {
        self.extras.insert(key.into(), value);
    }

    pub fn to_json_value(&self) -> Value {
        let mut out = Map::new();
        out.insert("query".into(), Value::String(self.query.clone()));
        out.insert("rows".into(), Value::Array(self.rows.iter().map(Row::to_json).collect()));
        for (k, v) in &self.extras {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json_value()).expect("values serialize");
        text.push('\n');
        text
    }

    /// Columns `query,word,entry,value`; the word is its compact JSON form.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["query", "word", "entry", "value"]).expect("in-memory write");
        for row in &self.rows {
            let entry = row.entry.map(|e| e.to_string()).unwrap_or_default();
            writer
                .write_record([row.query.as_str(), &row.word.to_string(), &entry, &row.value])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}
