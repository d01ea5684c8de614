//! JSON file formats and input resolution.

use std::collections::BTreeMap;
use std::io::Read;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use toripos_core::divisor::TCartierDivisor;
use toripos_core::klyachko::{Filtration, ToricVectorBundle};
use toripos_core::polytope::LatticePolytope;
use toripos_core::{DualCharacter, Fan, Int, LatticeVector, Rat, RationalSubspace};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub fan: FanJson,
    pub u: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub threshold: i64,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub fan: FanJson,
    pub rank: usize,
    pub filtrations: BTreeMap<String, Vec<StepJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub rank: usize,
    pub vertices: Vec<Vec<i64>>,
}

/// Where input paths are looked up.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    /// The file system, with `-` meaning the given standard input.
    Files { stdin: Option<&'a str> },
    /// The embedded corpus.
    Corpus,
}

impl Source<'_> {
    pub fn read(&self, path: &str) -> Result<String, CliError> {
        match self {
            Source::Files { stdin: Some(text) } if path == "-" => Ok((*text).to_string()),
            Source::Files { stdin: None } if path == "-" => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
                Ok(s)
            }
            Source::Files { .. } => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}"))),
            Source::Corpus => crate::corpus::file(path)
                .map(str::to_string)
                .ok_or_else(|| CliError::Io(format!("{path}: not in the corpus"))),
        }
    }

    pub fn json(&self, path: &str) -> Result<Value, CliError> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{path}: {e}")))
    }
}

fn decode<T: serde::de::DeserializeOwned>(what: &str, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Schema(format!("{what}: {e}")))
}

pub fn parse_rational(s: &str) -> Result<Rat, CliError> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| CliError::Schema(format!("{s:?} is not a rational number")))
}

fn rational_vector(v: &[String]) -> Result<Vec<Rat>, CliError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn index_map<T: Clone>(what: &str, map: &BTreeMap<String, T>, n: usize) -> Result<Vec<T>, CliError> {
    let mut out: Vec<Option<T>> = vec![None; n];
    for (k, v) in map {
        let i: usize = k
            .parse()
            .map_err(|_| CliError::Schema(format!("{what} key {k:?} is not an index")))?;
        if i >= n {
            return Err(CliError::Schema(format!("{what} index {i} out of range (have {n})")));
        }
        out[i] = Some(v.clone());
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::Schema(format!("{what} {i} is missing"))))
        .collect()
}

pub fn fan_from_json(f: &FanJson) -> Result<Fan, CliError> {
    let rays = f.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
    Ok(Fan::new(f.rank, rays, f.cones.clone())?)
}

pub fn read_fan(v: Value) -> Result<Fan, CliError> {
    fan_from_json(&decode::<FanJson>("fan", v)?)
}

pub fn read_divisor(v: Value) -> Result<TCartierDivisor, CliError> {
    let d: DivisorJson = decode("divisor", v)?;
    let fan = Arc::new(fan_from_json(&d.fan)?);
    let u = index_map("character of cone", &d.u, fan.num_cones())?
        .iter()
        .map(|c| rational_vector(c).map(DualCharacter::new))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TCartierDivisor::new(fan, u)?)
}

pub fn read_bundle(v: Value) -> Result<ToricVectorBundle, CliError> {
    let b: BundleJson = decode("bundle", v)?;
    let fan = Arc::new(fan_from_json(&b.fan)?);
    let steps = index_map("filtration of ray", &b.filtrations, fan.rays().len())?;
    let filtrations = steps
        .iter()
        .map(|steps| {
            let steps = steps
                .iter()
                .map(|s| {
                    let basis = s
                        .basis
                        .iter()
                        .map(|v| rational_vector(v))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((Int::from(s.threshold), RationalSubspace::span(b.rank, &basis)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Filtration::new(b.rank, steps)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(ToricVectorBundle::new(fan, b.rank, filtrations)?)
}

pub fn read_polytope(v: Value) -> Result<LatticePolytope, CliError> {
    let p: PolytopeJson = decode("polytope", v)?;
    if let Some(bad) = p.vertices.iter().find(|x| x.len() != p.rank) {
        return Err(CliError::Schema(format!(
            "vertex {bad:?} does not have rank {}",
            p.rank
        )));
    }
    let pts: Vec<DualCharacter> = p.vertices.iter().map(|x| DualCharacter::from_i64(x)).collect();
    Ok(LatticePolytope::hull(&pts)?)
}

pub fn parse_point(s: &str) -> Result<DualCharacter, CliError> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coords = t.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(DualCharacter::new(coords))
}

pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rat(x: &Rat) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        json!(x.to_string())
    }
}

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn character(u: &DualCharacter) -> Value {
    rats(u.coords())
}

pub fn lattice(v: &LatticeVector) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

/// `(a,b,c)` with rationals written `p/q`.
pub fn tuple(u: &DualCharacter) -> String {
    let parts: Vec<String> = u.coords().iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Plain-text form of a report: one `key: value` line per field.
pub fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}
