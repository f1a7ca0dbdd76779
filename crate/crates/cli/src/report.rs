use serde::Serialize;
use serde_json::{json, Map, Value};

/// Everything a handler produces besides timing.
pub struct Outcome {
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub bound: Option<String>,
    /// Property verified (exit 0) or violated (exit 1).
    pub ok: bool,
}

impl Outcome {
    pub fn new(inputs: Map<String, Value>, result: Value, ok: bool) -> Self {
        Outcome { inputs, result, certificates: Vec::new(), bound: None, ok }
    }

    pub fn with_certificates<T: Serialize>(mut self, certs: &[T]) -> Self {
        self.certificates = certs.iter().map(|c| serde_json::to_value(c).expect("certificate serializes")).collect();
        self
    }

    pub fn with_bound(mut self, bound: impl ToString) -> Self {
        self.bound = Some(bound.to_string());
        self
    }
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub conventions: Value,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u64,
}

/// Conventions every report echoes so that no two runs silently disagree on them.
pub fn conventions() -> Value {
    json!({
        "torus": "R/Z, representatives in (-1/2, 1/2]",
        "t_plus": "closed arc [-1/4, 1/4]",
        "arcs": "open (-r, r), 0 < r <= 1/2",
        "rationals": "strings a/b",
    })
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payload serializes")
}

/// `(0),(1)`-style rendering that the set parsers read back.
pub fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn strings<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}
