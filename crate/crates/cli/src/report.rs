//! Command reports, rendered as text or JSON from the same data.

use serde_json::{json, Map, Value as Json};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    /// `None` for pure computations, otherwise whether the property holds.
    pub verdict: Option<bool>,
    pub fields: Vec<(String, Json)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), verdict: None, fields: Vec::new() }
    }

    pub fn verdict(mut self, holds: bool) -> Self {
        self.verdict = Some(holds);
        self
    }

    pub fn set_verdict(&mut self, holds: bool) {
        self.verdict = Some(holds);
    }

    pub fn field(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Json>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Json> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        map.insert("command".into(), json!(self.command));
        map.insert("verdict".into(), self.verdict.map_or(Json::Null, Json::Bool));
        map.insert("exit_code".into(), json!(self.exit_code()));
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        Json::Object(map)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(v) = self.verdict {
            out.push_str(&format!("verdict: {}\n", if v { "holds" } else { "fails" }));
        }
        for (k, v) in &self.fields {
            write_entry(&mut out, k, v, 0);
        }
        out
    }
}

fn inline(v: &Json) -> Option<String> {
    match v {
        Json::Null => Some("none".into()),
        Json::Bool(b) => Some(b.to_string()),
        Json::Number(n) => Some(n.to_string()),
        Json::String(s) => Some(s.clone()),
        Json::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", items.iter().filter_map(inline).collect::<Vec<_>>().join(", ")))
        }
        Json::Array(items) if items.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_array() && !y.is_object()))) => {
            Some(format!("[{}]", items.iter().filter_map(inline).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_entry(out: &mut String, key: &str, v: &Json, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Json::Object(map) => {
            for (k, x) in map {
                write_entry(out, k, x, depth + 1);
            }
        }
        Json::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                write_entry(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => unreachable!("scalars render inline"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_share_the_verdict() {
        let r = Report::new("demo").verdict(false).field("nested", json!({"a": [1, 2], "b": [{"c": "x"}]}));
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.to_json()["verdict"], json!(false));
        let text = r.to_text();
        assert!(text.contains("verdict: fails"));
        assert!(text.contains("    [0]:\n      c: x"));
    }
}
