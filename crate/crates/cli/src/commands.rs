//! One function per subcommand, each returning a JSON report.

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use toripos_core::divisor::{divisor_on_fan, TCartierDivisor};
use toripos_core::klyachko::ToricVectorBundle;
use toripos_core::mlbundle::{
    cone_of_vertex, ml_globally_generated_by_weights, ml_positivity, ml_witnesses_at, multiplication_surjective,
    normally_generated, MLProblem,
};
use toripos_core::polytope::LatticePolytope;
use toripos_core::positivity::{
    blowup_pullback, qtwist_positivity, report_from_splittings, restrict_to_wall, CurveSplitting, PositivityReport,
    QTwistedBundle,
};
use toripos_core::sections::{h0, nonvanishing_section_at};
use toripos_core::{Error, Fan, Int, Rat, Wall};

use crate::io::{self, Source};
use crate::CliError;

fn bundle_at(src: &Source, path: &str, frobenius: Option<u32>) -> Result<ToricVectorBundle, CliError> {
    let b = io::read_bundle(src.json(path)?)?;
    match frobenius {
        Some(q) => Ok(b.frobenius_pullback(q)?),
        None => Ok(b),
    }
}

pub fn fan_validate(src: &Source, path: &str, allow_incomplete: bool) -> Result<(Value, bool), CliError> {
    let fan = io::read_fan(src.json(path)?)?;
    let report = fan.validate(!allow_incomplete);
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| match f {
            toripos_core::fan::ValidationFailure::NotAFan(s) => json!({"kind": "not_a_fan", "detail": s}),
            toripos_core::fan::ValidationFailure::IncompleteSupport(s) => {
                json!({"kind": "incomplete_support", "detail": s})
            }
        })
        .collect();
    let valid = report.is_valid();
    let walls = if valid { json!(fan.walls().len()) } else { Value::Null };
    Ok((
        json!({
            "valid": valid,
            "failures": failures,
            "complete": report.complete,
            "heuristic_completeness": report.heuristic_completeness,
            "sampled_directions": report.sampled_directions,
            "smooth": fan.is_smooth(),
            "rays": fan.rays().len(),
            "cones": fan.num_cones(),
            "walls": walls,
        }),
        valid,
    ))
}

pub fn bundle_validate(src: &Source, path: &str) -> Result<Value, CliError> {
    let b = io::read_bundle(src.json(path)?)?;
    let cones: Vec<Value> = b
        .decompositions()
        .iter()
        .map(|d| {
            json!({
                "cone": d.cone,
                "characters": d.characters().iter().map(io::character).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({ "valid": true, "rank": b.rank(), "decompositions": cones }))
}

fn wall_json(fan: &Fan, index: usize, w: &Wall) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("wall".into(), json!(index));
    m.insert("cones".into(), json!([w.first, w.second]));
    m.insert("rays".into(), json!(w.rays));
    m.insert(
        "ray_vectors".into(),
        Value::Array(w.rays.iter().map(|&r| io::lattice(fan.ray(r))).collect()),
    );
    m.insert("normal".into(), io::character(&w.normal));
    m
}

fn splitting_json(fan: &Fan, index: usize, s: &CurveSplitting) -> Value {
    let mut m = wall_json(fan, index, &s.wall);
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|e| {
            json!({
                "u": io::character(&e.u),
                "u_prime": io::character(&e.u_prime),
                "degree": io::int(&e.degree),
                "multiplicity": e.multiplicity,
            })
        })
        .collect();
    m.insert("splitting".into(), Value::Array(entries));
    m.insert(
        "degrees".into(),
        Value::Array(s.degrees().iter().map(io::int).collect()),
    );
    Value::Object(m)
}

fn splittings(b: &ToricVectorBundle, walls: &[Wall]) -> Result<Vec<CurveSplitting>, CliError> {
    Ok(walls
        .par_iter()
        .map(|w| restrict_to_wall(b, w))
        .collect::<Result<Vec<_>, Error>>()?)
}

pub fn restrict(src: &Source, path: &str, wall: Option<usize>, frobenius: Option<u32>) -> Result<Value, CliError> {
    let b = bundle_at(src, path, frobenius)?;
    let fan = b.fan().clone();
    let walls = fan.walls();
    let chosen: Vec<(usize, Wall)> = match wall {
        Some(i) => {
            let w = walls
                .get(i)
                .ok_or_else(|| Error::InvalidInput(format!("no wall {i}; the fan has {}", walls.len())))?;
            vec![(i, w.clone())]
        }
        None => walls.into_iter().enumerate().collect(),
    };
    let only: Vec<Wall> = chosen.iter().map(|(_, w)| w.clone()).collect();
    let split = splittings(&b, &only)?;
    let out: Vec<Value> = chosen
        .iter()
        .zip(&split)
        .map(|((i, _), s)| splitting_json(&fan, *i, s))
        .collect();
    let multisets: Vec<Value> = split
        .iter()
        .map(|s| Value::Array(s.degrees().iter().map(io::int).collect()))
        .collect();
    Ok(json!({ "walls": out, "degrees": multisets }))
}

fn full_report(b: &ToricVectorBundle) -> Result<PositivityReport, CliError> {
    let walls = b.fan().walls();
    Ok(report_from_splittings(b, splittings(b, &walls)?)?)
}

pub fn positivity(src: &Source, path: &str, frobenius: Option<u32>) -> Result<Value, CliError> {
    let b = bundle_at(src, path, frobenius)?;
    let r = full_report(&b)?;
    // τ(E, x) is the Seshadri constant at x for nef bundles on smooth varieties
    let seshadri = if r.nef && b.fan().is_smooth() {
        Value::Array(r.tau_at.iter().map(io::int).collect())
    } else {
        Value::Null
    };
    let certificate = r.certificate.as_ref().map(|c| {
        c.sections
            .iter()
            .map(|(u, s)| json!({"character": io::character(u), "vector": io::rats(s)}))
            .collect::<Vec<_>>()
    });
    Ok(json!({
        "nef": r.nef,
        "ample": r.ample,
        "tau": io::int(&r.tau_global),
        "tau_at": r.tau_at.iter().map(io::int).collect::<Vec<_>>(),
        "seshadri": seshadri,
        "trivial": r.trivial,
        "certificate": certificate,
    }))
}

pub fn sections_h0(src: &Source, path: &str) -> Result<Value, CliError> {
    let b = io::read_bundle(src.json(path)?)?;
    let h = h0(&b)?;
    let support: Vec<Value> = h
        .support
        .iter()
        .map(|(u, d)| json!({"character": io::character(u), "dim": d}))
        .collect();
    Ok(json!({ "h0": h.total, "support": support }))
}

pub fn sections_nonvanishing(src: &Source, path: &str, cone: usize) -> Result<Value, CliError> {
    let b = io::read_bundle(src.json(path)?)?;
    let s = nonvanishing_section_at(&b, cone)?;
    let value = b.fiber_evaluation(cone, &s.character, &s.vector)?;
    Ok(json!({
        "cone": cone,
        "character": io::character(&s.character),
        "vector": io::rats(&s.vector),
        "value": io::rats(&value),
    }))
}

pub fn blowup(src: &Source, path: &str, cone: usize, m: u32) -> Result<Value, CliError> {
    let b = io::read_bundle(src.json(path)?)?;
    let bl = blowup_pullback(&b, cone, m)?;
    let fan = bl.subdivision.fan.clone();
    let new: Vec<usize> = bl.subdivision.new_cones.iter().map(|(i, _)| *i).collect();
    let exceptional: Vec<Value> = fan
        .walls()
        .iter()
        .enumerate()
        .filter(|(_, w)| new.contains(&w.first) && new.contains(&w.second))
        .map(|(i, w)| {
            let mut m = wall_json(&fan, i, w);
            m.insert("minus_f_degree".into(), io::rat(&bl.minus_exceptional.wall_degree(w)));
            Value::Object(m)
        })
        .collect();
    let degrees: Vec<Value> = exceptional.iter().map(|w| w["minus_f_degree"].clone()).collect();
    let r = full_report(&bl.bundle)?;
    Ok(json!({
        "cone": cone,
        "m": m,
        "fan": {
            "rank": fan.rank(),
            "rays": fan.rays().iter().map(io::lattice).collect::<Vec<_>>(),
            "cones": fan.cones(),
        },
        "new_ray": bl.subdivision.new_ray,
        "exceptional_walls": exceptional,
        "exceptional_curve_degrees": degrees,
        "nef": r.nef,
        "ample": r.ample,
        "tau": io::int(&r.tau_global),
    }))
}

pub fn qtwist(
    src: &Source,
    path: &str,
    lambda: &str,
    cone: Option<usize>,
    delta: Option<&str>,
) -> Result<Value, CliError> {
    let lambda = io::parse_rational(lambda)?;
    let b = io::read_bundle(src.json(path)?)?;
    let (q, what) = match (cone, delta) {
        (Some(c), None) => {
            let bl = blowup_pullback(&b, c, 0)?;
            let d = bl.minus_exceptional.scale(&lambda);
            (
                QTwistedBundle::new(bl.bundle, d)?,
                format!("p^*E<-{lambda} F> at cone {c}"),
            )
        }
        (None, Some(p)) => {
            let d = io::read_divisor(src.json(p)?)?;
            (QTwistedBundle::new(b, d.scale(&lambda))?, format!("E<{lambda} delta>"))
        }
        _ => return Err(CliError::Usage("give exactly one of --cone and --delta".into())),
    };
    let r = qtwist_positivity(&q)?;
    Ok(json!({
        "twist": what,
        "lambda": io::rat(&lambda),
        "nef": r.nef,
        "ample": r.ample,
        "tau": io::rat(&r.tau_global),
        "tau_at": r.tau_at.iter().map(io::rat).collect::<Vec<_>>(),
    }))
}

/// A line bundle given as a polytope or as divisor data.
enum LineInput {
    Polytope(LatticePolytope),
    Divisor(TCartierDivisor),
}

fn line_input(src: &Source, path: &str) -> Result<LineInput, CliError> {
    let v = src.json(path)?;
    if v.get("vertices").is_some() {
        Ok(LineInput::Polytope(io::read_polytope(v)?))
    } else if v.get("u").is_some() {
        Ok(LineInput::Divisor(io::read_divisor(v)?))
    } else {
        Err(CliError::Schema(format!("{path}: expected a polytope or a divisor")))
    }
}

fn power_of(l: LineInput, k: u32) -> Result<LineInput, CliError> {
    if k == 0 {
        return Err(CliError::Usage("powers must be positive".into()));
    }
    Ok(match l {
        LineInput::Polytope(p) => LineInput::Polytope(p.dilate(k)?),
        LineInput::Divisor(d) => LineInput::Divisor(d.scale(&Rat::from_integer(Int::from(k)))),
    })
}

pub struct MlArgs<'a> {
    pub l: &'a str,
    pub l_power: u32,
    pub lprime: &'a str,
    pub lprime_power: u32,
    pub q: u32,
    pub at_vertex: Option<&'a str>,
    pub oracle: bool,
}

pub fn mlgen(src: &Source, a: &MlArgs) -> Result<Value, CliError> {
    let l = power_of(line_input(src, a.l)?, a.l_power)?;
    let lp = power_of(line_input(src, a.lprime)?, a.lprime_power)?;
    let prob = match (l, lp) {
        (LineInput::Polytope(p), LineInput::Polytope(pp)) => MLProblem::from_polytopes(&p, &pp, a.q)?,
        (LineInput::Divisor(d), LineInput::Divisor(dp)) => MLProblem::new(d, dp, a.q)?,
        (LineInput::Polytope(p), LineInput::Divisor(dp)) => {
            let d = divisor_on_fan(dp.fan().clone(), &p)?;
            MLProblem::new(d, dp, a.q)?
        }
        (LineInput::Divisor(d), LineInput::Polytope(pp)) => {
            let dp = divisor_on_fan(d.fan().clone(), &pp)?;
            MLProblem::new(d, dp, a.q)?
        }
    };
    let pos = ml_positivity(&prob)?;
    let cones: Vec<usize> = (0..prob.fan().num_cones()).collect();
    let per_cone = cones
        .par_iter()
        .map(|&c| ml_witnesses_at(&prob, c))
        .collect::<Result<Vec<_>, Error>>()?;
    let globally_generated = per_cone.iter().all(Vec::is_empty);
    let shown: Vec<usize> = match a.at_vertex {
        Some(v) => {
            let v = io::parse_point(v)?;
            let c = cone_of_vertex(&prob, &v)
                .ok_or_else(|| Error::InvalidInput(format!("{} is not a vertex of P", io::tuple(&v))))?;
            vec![c]
        }
        None => cones.clone(),
    };
    let witnesses: Vec<Value> = shown
        .iter()
        .flat_map(|&c| per_cone[c].iter())
        .map(|w| json!([format!("cone@{}", io::tuple(&w.vertex)), io::character(&w.u)]))
        .collect();
    let mut out = json!({
        "rank": prob.h0() - 1,
        "q": a.q,
        "nef": pos.nef,
        "ample": pos.ample,
        "tau": io::int(&pos.tau_global),
        "globally_generated": globally_generated,
        "witnesses": witnesses,
    });
    if let Some(v) = a.at_vertex {
        out["at_vertex"] = json!(v);
        out["generated_at_vertex"] = json!(shown.iter().all(|&c| per_cone[c].is_empty()));
    }
    if a.oracle {
        let deficits = ml_globally_generated_by_weights(&prob)?;
        let agrees = deficits.len() == per_cone.iter().filter(|w| !w.is_empty()).count()
            && deficits.iter().all(|d| {
                let mut us: Vec<_> = per_cone[d.cone].iter().map(|w| w.u.clone()).collect();
                us.sort();
                let mut missing = d.missing.clone();
                missing.sort();
                us == missing
            });
        if !agrees {
            return Err(Error::InternalInconsistency(
                "weight-space oracle disagrees with the lattice point test".into(),
            )
            .into());
        }
        out["oracle_agrees"] = json!(true);
    }
    Ok(out)
}

pub fn mult(src: &Source, p1: &str, p2: &str) -> Result<Value, CliError> {
    let a = io::read_polytope(src.json(p1)?)?;
    let b = io::read_polytope(src.json(p2)?)?;
    let r = multiplication_surjective(&a, &b)?;
    Ok(json!({
        "surjective": r.surjective,
        "witnesses": r.witnesses.iter().map(io::character).collect::<Vec<_>>(),
    }))
}

pub fn normgen(src: &Source, p: &str, m_max: Option<usize>) -> Result<Value, CliError> {
    let p = io::read_polytope(src.json(p)?)?;
    let r = normally_generated(&p, m_max)?;
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|(m, w)| json!({"m": m, "witnesses": w.iter().map(io::character).collect::<Vec<_>>()}))
        .collect();
    Ok(json!({
        "normally_generated": r.normally_generated,
        "m_max": r.m_max,
        "failures": failures,
    }))
}
