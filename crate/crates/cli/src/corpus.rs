//! Example inputs shipped inside the binary, with golden outputs.

use clap::Parser;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::io::Source;
use crate::{dispatch, Cli, CliError};

const FILES: &[(&str, &str)] = &[
    ("not-a-fan.json", include_str!("../corpus/not-a-fan.json")),
    ("o1-p1.json", include_str!("../corpus/o1-p1.json")),
    ("o1-p2-divisor.json", include_str!("../corpus/o1-p2-divisor.json")),
    ("o2-plus-o1-p2.json", include_str!("../corpus/o2-plus-o1-p2.json")),
    ("p1.json", include_str!("../corpus/p1.json")),
    ("p1xp1.json", include_str!("../corpus/p1xp1.json")),
    ("p2.json", include_str!("../corpus/p2.json")),
    ("p3.json", include_str!("../corpus/p3.json")),
    ("simplex-ex11.json", include_str!("../corpus/simplex-ex11.json")),
    ("simplex-ex11x2.json", include_str!("../corpus/simplex-ex11x2.json")),
    ("simplex-ex13.json", include_str!("../corpus/simplex-ex13.json")),
    ("simplex4.json", include_str!("../corpus/simplex4.json")),
    ("simplex4x2.json", include_str!("../corpus/simplex4x2.json")),
    (
        "tangent-p2-minus1.json",
        include_str!("../corpus/tangent-p2-minus1.json"),
    ),
    ("tangent-p2.json", include_str!("../corpus/tangent-p2.json")),
    (
        "tangent-p3-minus1.json",
        include_str!("../corpus/tangent-p3-minus1.json"),
    ),
    ("tangent-p3.json", include_str!("../corpus/tangent-p3.json")),
    ("triangle.json", include_str!("../corpus/triangle.json")),
    ("trivial-twist-p2.json", include_str!("../corpus/trivial-twist-p2.json")),
];

const INDEX: &str = include_str!("../corpus/index.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub description: String,
    pub args: Vec<String>,
    pub expected: Map<String, Value>,
}

pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn entries() -> Vec<Entry> {
    serde_json::from_str(INDEX).expect("embedded corpus index is valid")
}

pub fn list() -> Value {
    let entries: Vec<Value> = entries()
        .into_iter()
        .map(|e| json!({"name": e.name, "description": e.description, "args": e.args.join(" ")}))
        .collect();
    json!({ "entries": entries, "files": FILES.iter().map(|(n, _)| *n).collect::<Vec<_>>() })
}

/// Runs an entry and keeps only the fields its golden output names.
pub fn replay(entry: &Entry) -> Result<Value, CliError> {
    let argv = std::iter::once("toripos").chain(entry.args.iter().map(String::as_str));
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(format!("{}: {e}", entry.name)))?;
    let (full, _) = dispatch(&Source::Corpus, &cli.command)?;
    let got: Map<String, Value> = entry
        .expected
        .keys()
        .map(|k| (k.clone(), full.get(k).cloned().unwrap_or(Value::Null)))
        .collect();
    let got = Value::Object(got);
    let expected = Value::Object(entry.expected.clone());
    if got != expected {
        return Err(CliError::Golden {
            name: entry.name.clone(),
            expected: expected.to_string(),
            got: got.to_string(),
        });
    }
    Ok(got)
}

pub fn run(name: Option<&str>) -> Result<Value, CliError> {
    let all = entries();
    match name {
        Some(n) => {
            let e = all
                .iter()
                .find(|e| e.name == n)
                .ok_or_else(|| CliError::Usage(format!("no corpus entry named {n:?}")))?;
            replay(e)
        }
        None => {
            let mut passed = Map::new();
            for e in &all {
                replay(e)?;
                passed.insert(e.name.clone(), json!("ok"));
            }
            Ok(json!({ "passed": all.len(), "entries": passed }))
        }
    }
}
