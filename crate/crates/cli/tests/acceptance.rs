//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use rand_core::RngCore;
use serde_json::{json, Value};
use toripos_core::divisor::TCartierDivisor;
use toripos_core::klyachko::ToricVectorBundle;
use toripos_core::linalg::{rank, rat};
use toripos_core::mlbundle::{
    ml_globally_generated, ml_globally_generated_by_weights, multiplication_surjective, MLProblem,
};
use toripos_core::polytope::LatticePolytope;
use toripos_core::positivity::{blowup_pullback, positivity_report, restrict_all, seshadri};
use toripos_core::sections::nonvanishing_section_at;
use toripos_core::{DualCharacter, Int, Rat, RationalSubspace};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn corpus_path(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the command line in-process with `--json`; corpus file names are
/// resolved to paths.
fn cli(args: &[&str]) -> Result<Value, String> {
    let mut argv = vec!["toripos".to_string(), "--json".to_string()];
    argv.extend(args.iter().map(|a| {
        if a.ends_with(".json") {
            corpus_path(a)
        } else {
            a.to_string()
        }
    }));
    let out = toripos::run(argv);
    if out.code != 0 {
        return Err(format!("exit {}: {}", out.code, out.stderr));
    }
    serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
}

fn hull(points: &[&[i64]]) -> LatticePolytope {
    let pts: Vec<DualCharacter> = points.iter().map(|p| DualCharacter::from_i64(p)).collect();
    LatticePolytope::hull(&pts).unwrap()
}

fn example_11() -> Check {
    let v = cli(&[
        "mlgen",
        "--L",
        "simplex-ex11.json",
        "--L-power",
        "2",
        "--Lprime",
        "simplex-ex11.json",
        "--at-vertex",
        "0,0,0",
    ])?;
    ensure!(v["nef"] == json!(true), "nef: {}", v["nef"]);
    ensure!(
        v["globally_generated"] == json!(false),
        "globally_generated: {}",
        v["globally_generated"]
    );
    ensure!(
        v["witnesses"] == json!([["cone@(0,0,0)", [1, 1, 1]]]),
        "witnesses: {}",
        v["witnesses"]
    );
    // the same failure occurs at the other three fixed points
    let all = cli(&[
        "mlgen",
        "--L",
        "simplex-ex11.json",
        "--L-power",
        "2",
        "--Lprime",
        "simplex-ex11.json",
    ])?;
    let all = all["witnesses"].as_array().ok_or("no witnesses")?;
    ensure!(all.len() == 4, "{} witnesses in all", all.len());
    ensure!(all.iter().all(|w| w[1] == json!([1, 1, 1])), "witnesses: {all:?}");
    Ok(())
}

fn example_12() -> Check {
    let v = cli(&[
        "mlgen",
        "--L",
        "simplex4.json",
        "--L-power",
        "3",
        "--Lprime",
        "simplex4.json",
        "--Lprime-power",
        "2",
        "--at-vertex",
        "0,0,0,0",
    ])?;
    ensure!(v["ample"] == json!(true), "ample: {}", v["ample"]);
    ensure!(
        v["globally_generated"] == json!(false),
        "globally_generated: {}",
        v["globally_generated"]
    );
    let p = hull(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
        &[1, 1, 1, 3],
    ]);
    let w = DualCharacter::from_i64(&[1, 1, 1, 1]);
    let q = p.dilate(2).unwrap().reflect_translate(&w).unwrap();
    let set: Vec<DualCharacter> = p
        .dilate(3)
        .unwrap()
        .lattice_points()
        .into_iter()
        .filter(|x| q.contains(x))
        .collect();
    ensure!(set == vec![w], "3P ∩ ((1,1,1,1) - 2P) ∩ M = {set:?}");
    Ok(())
}

fn example_13() -> Check {
    let v = cli(&[
        "mlgen",
        "--L",
        "simplex-ex13.json",
        "--L-power",
        "2",
        "--Lprime",
        "simplex-ex13.json",
        "--Lprime-power",
        "3",
        "--q",
        "2",
        "--at-vertex",
        "0,0,0",
    ])?;
    ensure!(v["ample"] == json!(true), "ample: {}", v["ample"]);
    ensure!(
        v["globally_generated"] == json!(false),
        "globally_generated: {}",
        v["globally_generated"]
    );
    ensure!(
        v["witnesses"] == json!([["cone@(0,0,0)", [1, 1, 1]]]),
        "witnesses: {}",
        v["witnesses"]
    );
    Ok(())
}

fn h1_witness() -> Check {
    let v = cli(&["mult", "--P1", "simplex4.json", "--P2", "simplex4x2.json"])?;
    ensure!(v["surjective"] == json!(false), "(P, 2P) surjective");
    ensure!(
        v["witnesses"] == json!([[1, 1, 1, 1]]),
        "(P, 2P) witnesses {}",
        v["witnesses"]
    );
    let v = cli(&["mult", "--P1", "simplex-ex11x2.json", "--P2", "simplex-ex11.json"])?;
    ensure!(v["surjective"] == json!(true), "(2P, P) not surjective");
    ensure!(v["witnesses"] == json!([]), "(2P, P) witnesses {}", v["witnesses"]);
    Ok(())
}

fn tangent_bundle() -> Check {
    let v = cli(&["sections", "--h0", "tangent-p2.json"])?;
    ensure!(v["h0"] == json!(8), "h0(T_P2) = {}", v["h0"]);
    let v = cli(&["sections", "--h0", "o2-plus-o1-p2.json"])?;
    ensure!(v["h0"] == json!(9), "h0(O(2)+O(1)) = {}", v["h0"]);
    for (file, lines, expected) in [
        ("tangent-p2-minus1.json", 3, json!([0, 1])),
        ("tangent-p3-minus1.json", 6, json!([0, 0, 1])),
    ] {
        let v = cli(&["restrict", file])?;
        let degrees = v["degrees"].as_array().ok_or("no degrees")?;
        ensure!(degrees.len() == lines, "{file}: {} lines", degrees.len());
        ensure!(degrees.iter().all(|d| *d == expected), "{file}: {}", v["degrees"]);
    }
    Ok(())
}

fn frobenius() -> Check {
    for (file, n) in [("tangent-p2.json", 2usize), ("tangent-p3.json", 3)] {
        for q in [2i64, 3] {
            let v = cli(&["restrict", file, "--frobenius", &q.to_string()])?;
            let mut expected = vec![q; n - 1];
            expected.push(2 * q);
            let degrees = v["degrees"].as_array().ok_or("no degrees")?;
            ensure!(degrees.len() == n * (n + 1) / 2, "P{n}: {} lines", degrees.len());
            ensure!(
                degrees.iter().all(|d| *d == json!(expected)),
                "P{n} q={q}: {}",
                v["degrees"]
            );
        }
    }
    Ok(())
}

fn blowup() -> Check {
    for c in 0..3 {
        let v = cli(&["blowup", "tangent-p2.json", "--cone", &c.to_string(), "--m", "1"])?;
        ensure!(
            v["exceptional_curve_degrees"] == json!([1]),
            "cone {c}: {}",
            v["exceptional_curve_degrees"]
        );
    }
    let mut checked = 0;
    for (name, b) in corpus() {
        if b.fan().rank() != 2 {
            continue;
        }
        let tau = positivity_report(&b).map_err(|e| e.to_string())?.tau_global;
        for c in 0..b.fan().num_cones() {
            for m in 0..=2u32 {
                let bl = blowup_pullback(&b, c, m).map_err(|e| e.to_string())?;
                let t = positivity_report(&bl.bundle).map_err(|e| e.to_string())?.tau_global;
                let m = Int::from(m);
                let bound = std::cmp::min(m.clone(), &tau - &m);
                ensure!(t >= bound, "{name} cone {c} m={m}: τ = {t} < {bound}");
                checked += 1;
            }
        }
    }
    ensure!(checked > 100, "only {checked} blowups checked");
    Ok(())
}

/// `sup{λ : p^*E⟨-λF⟩ nef}` read off the wall degrees: on each wall of the
/// blowup the twisted degrees are `d + λ c` with `c` the degree of `O(-F)`.
fn seshadri_from_degrees(b: &ToricVectorBundle, cone: usize) -> Result<Rat, String> {
    let bl = blowup_pullback(b, cone, 0).map_err(|e| e.to_string())?;
    let mut sup: Option<Rat> = None;
    for s in restrict_all(&bl.bundle).map_err(|e| e.to_string())? {
        let c = bl.minus_exceptional.wall_degree(&s.wall);
        let d = Rat::from_integer(s.min_degree());
        if c < rat(0) {
            let bound = d / -c;
            sup = Some(match sup {
                Some(x) if x <= bound => x,
                _ => bound,
            });
        } else if d < rat(0) {
            return Err(format!("p^*E is not nef on a wall with c = {c}"));
        }
    }
    sup.ok_or_else(|| "λ is unbounded".to_string())
}

fn seshadri_cross_check() -> Check {
    let p2 = p2();
    let mut bundles = vec![("T_P2".to_string(), tangent(&p2))];
    for d in 0..=3 {
        bundles.push((format!("O({d})"), o(&p2, d)));
    }
    for (name, b) in &bundles {
        for c in 0..3 {
            let tau = Rat::from_integer(seshadri(b, Some(c)).map_err(|e| e.to_string())?);
            let sup = seshadri_from_degrees(b, c)?;
            ensure!(sup == tau, "{name} at {c}: sup {sup} but τ {tau}");
        }
    }
    Ok(())
}

fn property_suites() -> Check {
    let corpus = corpus();
    let err = |e: toripos_core::Error| e.to_string();

    // (a) decompositions reproduce the filtrations
    for (name, b) in &corpus {
        let fan = b.fan();
        for c in 0..fan.num_cones() {
            let dec = b.decomposition(c);
            let total = RationalSubspace::sum_all(b.rank(), dec.parts.iter().map(|p| &p.space)).map_err(err)?;
            ensure!(total.is_full(), "(a) {name}: cone {c} does not span");
            for &r in fan.cone_rays(c) {
                for t in -4i64..=6 {
                    let t = Int::from(t);
                    let parts = dec
                        .parts
                        .iter()
                        .filter(|p| p.character.pair(fan.ray(r)) >= Rat::from_integer(t.clone()));
                    let expected = RationalSubspace::sum_all(b.rank(), parts.map(|p| &p.space)).map_err(err)?;
                    ensure!(
                        b.filtration(r).at(&t) == expected,
                        "(a) {name}: cone {c} ray {r} at {t}"
                    );
                }
            }
        }
    }

    // (b) restriction is independent of the basis of E
    let moved = [
        tangent(&p2()),
        sum(&tangent(&p2()), &o(&p2(), 1)),
        tangent(&p1p1()),
        tangent(&p3()),
    ];
    for seed in 0..20u64 {
        let mut rng = rng(seed);
        for b in &moved {
            let g = random_gl(&mut rng, b.rank());
            let c = b.change_basis(&g).map_err(err)?;
            let d1: Vec<_> = restrict_all(b).map_err(err)?.iter().map(|s| s.degrees()).collect();
            let d2: Vec<_> = restrict_all(&c).map_err(err)?.iter().map(|s| s.degrees()).collect();
            ensure!(d1 == d2, "(b) seed {seed}");
        }
    }

    // (c) degrees add up to the degree of the determinant
    for (name, b) in &corpus {
        let det = b.determinant().map_err(err)?;
        for s in restrict_all(b).map_err(err)? {
            ensure!(
                Rat::from_integer(s.total_degree()) == det.wall_degree(&s.wall),
                "(c) {name}"
            );
        }
    }

    // (d) decomposable bundles split as their summands
    let mut rng = rng(2024);
    for i in 0..20 {
        let fan = if i % 2 == 0 { p2() } else { p1p1() };
        let r = 1 + (rng.next_u32() % 3) as usize;
        let divisors: Vec<TCartierDivisor> = (0..r)
            .map(|_| {
                let values: Vec<Rat> = (0..fan.rays().len())
                    .map(|_| rat(i64::from(rng.next_u32() % 7) - 3))
                    .collect();
                TCartierDivisor::from_ray_values(fan.clone(), &values).unwrap()
            })
            .collect();
        let mut b = ToricVectorBundle::from_divisor(&divisors[0]).map_err(err)?;
        for d in &divisors[1..] {
            b = b
                .direct_sum(&ToricVectorBundle::from_divisor(d).map_err(err)?)
                .map_err(err)?;
        }
        for s in restrict_all(&b).map_err(err)? {
            let mut expected: Vec<Int> = divisors.iter().map(|d| d.wall_degree(&s.wall).to_integer()).collect();
            expected.sort();
            ensure!(s.degrees() == expected, "(d) bundle {i}");
        }
    }

    // (e) nef bundles have a section not vanishing at each fixed point
    // (f) trivial exactly when every degree vanishes, with a certificate
    for (name, b) in &corpus {
        let report = positivity_report(b).map_err(err)?;
        if report.nef {
            for c in 0..b.fan().num_cones() {
                let s = nonvanishing_section_at(b, c).map_err(|e| format!("(e) {name} at {c}: {e}"))?;
                let value = b.fiber_evaluation(c, &s.character, &s.vector).map_err(err)?;
                ensure!(
                    value.iter().any(|x| *x != rat(0)),
                    "(e) {name} at {c}: section vanishes"
                );
            }
        }
        let zero = report
            .splittings
            .iter()
            .all(|s| s.degrees().iter().all(|d| *d == Int::from(0)));
        ensure!(report.trivial == zero, "(f) {name}");
        ensure!(report.certificate.is_some() == zero, "(f) {name}: certificate");
        if let Some(cert) = &report.certificate {
            for c in 0..b.fan().num_cones() {
                let values: Vec<Vec<Rat>> = cert
                    .sections
                    .iter()
                    .map(|(u, s)| b.fiber_evaluation(c, u, s).unwrap())
                    .collect();
                ensure!(rank(&values) == b.rank(), "(f) {name}: certificate singular at {c}");
            }
        }
    }

    // (g) M_L ⊗ L is globally generated
    let polytopes = [
        hull(&[&[0, 0], &[1, 0], &[0, 1]]),
        hull(&[&[0, 0], &[2, 0], &[0, 2]]),
        hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
        hull(&[&[0, 0], &[2, 0], &[0, 1], &[2, 1]]),
        hull(&[&[0, 0], &[2, 0], &[1, 1], &[0, 1]]),
        hull(&[&[0, 0], &[2, 0], &[0, 1]]),
        hull(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]),
        hull(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
    ];
    for (i, p) in polytopes.iter().enumerate() {
        let prob = MLProblem::from_polytopes(p, p, 1).map_err(err)?;
        ensure!(
            ml_globally_generated(&prob).map_err(err)?.globally_generated,
            "(g) polytope {i}"
        );
    }

    // (h) smooth and H^0(L) ⊗ H^0(L') onto ⇒ M_{L ⊗ L'} ⊗ L' globally generated
    let triangles: Vec<_> = (1..=3).map(|k| hull(&[&[0, 0], &[k, 0], &[0, k]])).collect();
    let rectangles: Vec<_> = [(1, 1), (2, 1), (1, 2), (2, 2)]
        .iter()
        .map(|&(a, b)| hull(&[&[0, 0], &[a, 0], &[0, b], &[a, b]]))
        .collect();
    let mut checked = 0;
    for family in [&triangles, &rectangles] {
        for p in family.iter() {
            for pp in family.iter() {
                if !multiplication_surjective(p, pp).map_err(err)?.surjective {
                    continue;
                }
                let prob = MLProblem::from_polytopes(&p.minkowski_sum(pp).map_err(err)?, pp, 1).map_err(err)?;
                ensure!(prob.fan().is_smooth(), "(h) fan not smooth");
                ensure!(
                    ml_globally_generated(&prob).map_err(err)?.globally_generated,
                    "(h) pair {checked}"
                );
                checked += 1;
            }
        }
    }
    ensure!(checked >= 20, "(h) only {checked} pairs");

    // (i) the weight-space oracle agrees
    let mut failing = 0;
    for p in &polytopes {
        for (k, kp, q) in [(1, 1, 1), (2, 1, 1), (1, 1, 2), (2, 3, 2)] {
            if p.rank() == 3 && k * kp > 2 {
                continue;
            }
            let prob = MLProblem::from_polytopes(&p.dilate(k).unwrap(), &p.dilate(kp).unwrap(), q).map_err(err)?;
            let gg = ml_globally_generated(&prob).map_err(err)?;
            let deficits = ml_globally_generated_by_weights(&prob).map_err(err)?;
            failing += usize::from(!gg.globally_generated);
            let a: BTreeSet<(usize, DualCharacter)> = gg.witnesses.iter().map(|w| (w.cone, w.u.clone())).collect();
            let b: BTreeSet<(usize, DualCharacter)> = deficits
                .iter()
                .flat_map(|d| d.missing.iter().map(move |u| (d.cone, u.clone())))
                .collect();
            ensure!(a == b, "(i) disagreement at ({k}P, {kp}P, q={q})");
        }
    }
    ensure!(failing > 0, "(i) no failing instance exercised");
    Ok(())
}

const LIMIT: Duration = Duration::from_secs(10);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 example 11", example_11),
        ("2 example 12", example_12),
        ("3 example 13", example_13),
        ("4 H^1 witness", h1_witness),
        ("5 tangent bundle", tangent_bundle),
        ("6 Frobenius", frobenius),
        ("7 blowup", blowup),
        ("8 Seshadri cross-check", seshadri_cross_check),
        ("9 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            if took > LIMIT {
                Err(format!("took {took:.1?}"))
            } else {
                Ok(())
            }
        });
        match result {
            Ok(()) => println!("PASS {name} ({took:.2?})"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name}: {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
