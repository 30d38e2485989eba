//! Text and JSON renderings shared by the commands.

use serde_json::{json, Map, Value as Json};

use relkit::semantics::{Assignment, Interpretation};
use relkit::Diagnostic;

/// `X = v, Y = w` in variable order.
pub fn show_assignment(alpha: &Assignment) -> String {
    alpha
        .iter()
        .map(|(x, v)| format!("{x} = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn assignment_json(alpha: &Assignment) -> Json {
    Json::Object(
        alpha
            .iter()
            .map(|(x, v)| (x.clone(), json!(v.to_string())))
            .collect(),
    )
}

/// Each relation as a list of tuples of printed values.
pub fn relations_json(i: &Interpretation) -> Json {
    let mut out = Map::new();
    for (q, _) in i.predicates() {
        let tuples: Vec<Vec<String>> = i
            .relation(q)
            .map(|r| {
                r.iter()
                    .map(|t| t.iter().map(ToString::to_string).collect())
                    .collect()
            })
            .unwrap_or_default();
        out.insert(q.to_string(), json!(tuples));
    }
    Json::Object(out)
}

pub fn diagnostics_json(ds: &[Diagnostic]) -> Json {
    ds.iter()
        .map(|d| {
            json!({
                "code": d.code.to_string(),
                "message": d.message,
                "predicate": d.predicate,
                "span": d.span.as_ref().map(|s| json!({
                    "file": s.file,
                    "line": s.start_line,
                    "column": s.start_col,
                    "end_line": s.end_line,
                    "end_column": s.end_col,
                })),
            })
        })
        .collect()
}
