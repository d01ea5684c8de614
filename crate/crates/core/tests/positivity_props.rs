mod common;

use common::*;
use toripos_core::divisor::TCartierDivisor;
use toripos_core::klyachko::ToricVectorBundle;
use toripos_core::linalg::{rat, rat_frac};
use toripos_core::positivity::{
    blowup_pullback, positivity_report, qtwist_positivity, restrict_all, seshadri, seshadri_via_blowup, QTwistedBundle,
};
use toripos_core::{Int, Rat};

fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

#[test]
fn twisted_tangent_bundles_of_projective_spaces() {
    for n in [2usize, 3] {
        let fan = if n == 2 { p2() } else { p3() };
        let b = tangent(&fan)
            .twist(&TCartierDivisor::hyperplane_multiple(fan.clone(), -1).unwrap())
            .unwrap();
        let mut expected = vec![0i64; n - 1];
        expected.push(1);
        for s in restrict_all(&b).unwrap() {
            assert_eq!(s.degrees(), ints(&expected));
        }
    }
}

#[test]
fn frobenius_pullbacks_of_tangent_bundles() {
    for n in [2usize, 3] {
        let fan = if n == 2 { p2() } else { p3() };
        for q in [2i64, 3] {
            let b = tangent(&fan).frobenius_pullback(q as u32).unwrap();
            let mut expected = vec![q; n - 1];
            expected.push(2 * q);
            for s in restrict_all(&b).unwrap() {
                assert_eq!(s.degrees(), ints(&expected), "n={n} q={q}");
            }
        }
    }
}

#[test]
fn exceptional_curve_has_degree_one_against_minus_f() {
    for (fan, n) in [(p2(), 2usize), (p1p1(), 2), (p3(), 3)] {
        for c in 0..fan.num_cones() {
            let bl = blowup_pullback(&ToricVectorBundle::trivial(fan.clone(), 1).unwrap(), c, 1).unwrap();
            let new: Vec<usize> = bl.subdivision.new_cones.iter().map(|(i, _)| *i).collect();
            let inside: Vec<_> = bl
                .subdivision
                .fan
                .walls()
                .into_iter()
                .filter(|w| new.contains(&w.first) && new.contains(&w.second))
                .collect();
            assert_eq!(inside.len(), n * (n - 1) / 2);
            for w in inside {
                assert_eq!(bl.minus_exceptional.wall_degree(&w), rat(1));
            }
        }
    }
}

#[test]
fn blowup_twists_keep_the_positivity_bound() {
    let p2 = p2();
    let bundles = [tangent(&p2), o(&p2, 3), sum(&o(&p2, 2), &o(&p2, 3))];
    for b in &bundles {
        let tau = positivity_report(b).unwrap().tau_global;
        for c in 0..3 {
            for m in 0..=2u32 {
                let bl = blowup_pullback(b, c, m).unwrap();
                let t = positivity_report(&bl.bundle).unwrap().tau_global;
                let m = Int::from(m);
                let bound = std::cmp::min(m.clone(), &tau - &m);
                assert!(t >= bound, "tau {t} below {bound}");
            }
        }
        if positivity_report(b).unwrap().ample {
            for c in 0..3 {
                assert!(
                    positivity_report(&blowup_pullback(b, c, 1).unwrap().bundle)
                        .unwrap()
                        .nef
                );
            }
        }
    }
}

fn nef_at(b: &ToricVectorBundle, cone: usize, lambda: &Rat) -> bool {
    let bl = blowup_pullback(b, cone, 0).unwrap();
    let q = QTwistedBundle::new(bl.bundle.clone(), bl.minus_exceptional.scale(lambda)).unwrap();
    qtwist_positivity(&q).unwrap().nef
}

/// `sup{λ : p^*E⟨-λF⟩ nef}` by bisection followed by a search for the
/// simplest fraction in the final bracket.
fn seshadri_by_bisection(b: &ToricVectorBundle, cone: usize) -> Rat {
    let mut lo = rat(0);
    let mut hi = rat(16);
    assert!(nef_at(b, cone, &lo) && !nef_at(b, cone, &hi));
    for _ in 0..24 {
        let mid = (&lo + &hi) / rat(2);
        if nef_at(b, cone, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for den in 1..=12i64 {
        let num = (&lo * rat(den)).ceil();
        let cand = num / rat(den);
        if cand <= hi && nef_at(b, cone, &cand) {
            let above = &cand + rat_frac(1, 1 << 20);
            assert!(!nef_at(b, cone, &above));
            return cand;
        }
    }
    panic!("no simple fraction in [{lo}, {hi}]");
}

#[test]
fn seshadri_constants_agree_with_the_blowup() {
    let p2 = p2();
    let mut bundles = vec![tangent(&p2)];
    for d in 0..=3 {
        bundles.push(o(&p2, d));
    }
    bundles.push(tangent(&p1p1()));
    bundles.push(line(&p1p1(), &[2, 1, 0, 0]));
    for b in &bundles {
        for c in 0..b.fan().num_cones() {
            let tau = Rat::from_integer(seshadri(b, Some(c)).unwrap());
            assert_eq!(seshadri_by_bisection(b, c), tau);
            assert_eq!(seshadri_via_blowup(b, c).unwrap(), tau);
        }
    }
}
