use serde::Serialize;
use serde_json::{Map, Value};
use stabrepair::Document;

/// Output of one command in both renderings.
#[derive(Clone, Debug)]
pub struct Report {
    pub code: i32,
    verb: &'static str,
    lines: Vec<(String, String)>,
    fields: Map<String, Value>,
    document: Option<Document>,
}

impl Report {
    pub fn new(verb: &'static str) -> Self {
        Report { code: 0, verb, lines: Vec::new(), fields: Map::new(), document: None }
    }

    /// Text-only summary line.
    pub fn line(&mut self, key: &str, text: impl Into<String>) -> &mut Self {
        self.lines.push((key.to_string(), text.into()));
        self
    }

    /// JSON-only field.
    pub fn field(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.to_string(), v);
        self
    }

    /// Both a summary line and a JSON field.
    pub fn both(&mut self, key: &str, text: impl Into<String>, value: impl Serialize) -> &mut Self {
        self.line(key, text);
        self.field(&key.replace(' ', "_"), value)
    }

    pub fn document(&mut self, doc: Document) -> &mut Self {
        self.document = Some(doc);
        self
    }

    pub fn no(&mut self) -> &mut Self {
        self.code = 1;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# verb: {}\n# status: {}\n", self.verb, status(self.code));
        for (k, v) in &self.lines {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        if let Some(doc) = &self.document {
            out.push_str(&doc.to_text());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut m = self.fields.clone();
        m.insert("verb".into(), Value::from(self.verb));
        m.insert("status".into(), Value::from(status(self.code)));
        if let Some(doc) = &self.document {
            m.insert("instance".into(), Value::from(doc.to_text()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn status(code: i32) -> &'static str {
    if code == 0 {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabrepair::{parse_instance, Graph};

    #[test]
    fn text_report_parses_as_an_instance() {
        let g = Graph::with_unit_capacity(2, [(0, 1)]).unwrap();
        let mut r = Report::new("demo");
        r.both("cost", "1.5", 1.5).line("note", "text only").document(Document::from_graph(g));
        let text = r.to_text();
        assert!(text.starts_with("# verb: demo\n# status: yes\n# cost: 1.5\n# note: text only\n[agents]\n"));
        assert_eq!(parse_instance(&text).unwrap().graph.agent_count(), 2);
    }

    #[test]
    fn json_report_keys() {
        let mut r = Report::new("demo");
        r.both("removed count", "0", 0).no();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["removed_count"], 0);
        assert_eq!(v["status"], "no");
        assert!(v.get("instance").is_none());
        assert!(v.get("note").is_none());
    }
}
