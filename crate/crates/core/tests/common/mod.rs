#![allow(dead_code)]

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use toripos_core::divisor::TCartierDivisor;
use toripos_core::fan::{p1_times_p1, projective_line, projective_space};
use toripos_core::klyachko::ToricVectorBundle;
use toripos_core::linalg::{determinant, rat};
use toripos_core::{Fan, Rat};

pub fn p1() -> Arc<Fan> {
    Arc::new(projective_line())
}

pub fn p2() -> Arc<Fan> {
    Arc::new(projective_space(2))
}

pub fn p3() -> Arc<Fan> {
    Arc::new(projective_space(3))
}

pub fn p1p1() -> Arc<Fan> {
    Arc::new(p1_times_p1())
}

/// The blowup of `P^2` at the fixed point of cone 0.
pub fn f1() -> Arc<Fan> {
    Arc::new(projective_space(2).star_subdivide(0).unwrap().fan)
}

pub fn line(fan: &Arc<Fan>, values: &[i64]) -> ToricVectorBundle {
    let values: Vec<Rat> = values.iter().map(|&x| rat(x)).collect();
    ToricVectorBundle::from_divisor(&TCartierDivisor::from_ray_values(fan.clone(), &values).unwrap()).unwrap()
}

pub fn o(fan: &Arc<Fan>, d: i64) -> ToricVectorBundle {
    ToricVectorBundle::from_divisor(&TCartierDivisor::hyperplane_multiple(fan.clone(), d).unwrap()).unwrap()
}

pub fn tangent(fan: &Arc<Fan>) -> ToricVectorBundle {
    ToricVectorBundle::tangent(fan.clone()).unwrap()
}

pub fn sum(a: &ToricVectorBundle, b: &ToricVectorBundle) -> ToricVectorBundle {
    a.direct_sum(b).unwrap()
}

/// Invertible integer matrix with entries in `[-2, 2]`.
pub fn random_gl(rng: &mut ChaCha8Rng, r: usize) -> Vec<Vec<Rat>> {
    loop {
        let g: Vec<Vec<Rat>> = (0..r)
            .map(|_| (0..r).map(|_| rat(i64::from(rng.next_u32() % 5) - 2)).collect())
            .collect();
        if determinant(&g) != rat(0) {
            return g;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every bundle constructor applied to the small fans, with a name.
pub fn corpus() -> Vec<(String, ToricVectorBundle)> {
    let mut out: Vec<(String, ToricVectorBundle)> = Vec::new();
    let (p1, p2, p3, q, f1) = (p1(), p2(), p3(), p1p1(), f1());
    for d in -1..=2 {
        out.push((format!("O({d}) on P1"), o(&p1, d)));
    }
    out.push(("T_P1".into(), tangent(&p1)));
    out.push(("O(2)+O on P1".into(), sum(&o(&p1, 2), &o(&p1, 0))));
    for d in -1..=3 {
        out.push((format!("O({d}) on P2"), o(&p2, d)));
    }
    let t2 = tangent(&p2);
    out.push(("T_P2".into(), t2.clone()));
    out.push((
        "T_P2(-1)".into(),
        t2.twist(&TCartierDivisor::hyperplane_multiple(p2.clone(), -1).unwrap())
            .unwrap(),
    ));
    out.push((
        "T_P2(1)".into(),
        t2.twist(&TCartierDivisor::hyperplane_multiple(p2.clone(), 1).unwrap())
            .unwrap(),
    ));
    out.push(("O(2)+O(1) on P2".into(), sum(&o(&p2, 2), &o(&p2, 1))));
    out.push(("O(2)+O(3) on P2".into(), sum(&o(&p2, 2), &o(&p2, 3))));
    out.push(("T_P2+O(1)".into(), sum(&t2, &o(&p2, 1))));
    out.push(("F_2^* T_P2".into(), t2.frobenius_pullback(2).unwrap()));
    out.push((
        "T_P2 in another basis".into(),
        t2.change_basis(&[vec![rat(1), rat(2)], vec![rat(1), rat(3)]]).unwrap(),
    ));
    out.push((
        "det T_P2".into(),
        ToricVectorBundle::from_divisor(&t2.determinant().unwrap()).unwrap(),
    ));
    let t3 = tangent(&p3);
    out.push(("T_P3".into(), t3.clone()));
    out.push((
        "T_P3(-1)".into(),
        t3.twist(&TCartierDivisor::hyperplane_multiple(p3.clone(), -1).unwrap())
            .unwrap(),
    ));
    out.push(("O(1) on P3".into(), o(&p3, 1)));
    for (a, b) in [(0, 0), (1, 0), (1, 1), (2, 1), (-1, 1)] {
        out.push((format!("O({a},{b})"), line(&q, &[a, b, 0, 0])));
    }
    out.push(("T_P1xP1".into(), tangent(&q)));
    out.push((
        "O(1,0)+O(0,1)".into(),
        sum(&line(&q, &[1, 0, 0, 0]), &line(&q, &[0, 1, 0, 0])),
    ));
    out.push(("T_F1".into(), tangent(&f1)));
    out.push((
        "pullback of T_P2 to F1".into(),
        t2.subdivision_pullback(f1.clone()).unwrap(),
    ));
    out.push((
        "pullback of O(1) to F1".into(),
        o(&p2, 1).subdivision_pullback(f1.clone()).unwrap(),
    ));
    out.push((
        "trivial rank 2 on P2".into(),
        ToricVectorBundle::trivial(p2.clone(), 2).unwrap(),
    ));
    out
}
