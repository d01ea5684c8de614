//! Restrictions to invariant curves and the positivity notions read off
//! from them: nef, ample, `τ`, Seshadri constants, Q-twists, blowups and
//! triviality.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::divisor::{degree_along, same_fan, TCartierDivisor};
use crate::error::{Error, Result};
use crate::fan::{Side, StarSubdivision, Wall};
use crate::geometry::DualCharacter;
use crate::klyachko::{DecompositionPart, ToricVectorBundle};
use crate::linalg::{rank, rat_frac, Int, Rat, RationalSubspace};
use crate::sections::isotypical_sections;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SplitEntry {
    pub u: DualCharacter,
    pub u_prime: DualCharacter,
    pub multiplicity: usize,
    pub degree: Int,
}

/// `E|_C ≅ ⊕ L_{u,u'}` on the curve of a wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSplitting {
    pub wall: Wall,
    pub entries: Vec<SplitEntry>,
}

impl CurveSplitting {
    /// Degrees repeated by multiplicity, ascending.
    pub fn degrees(&self) -> Vec<Int> {
        let mut out: Vec<Int> = self
            .entries
            .iter()
            .flat_map(|e| core::iter::repeat_n(e.degree.clone(), e.multiplicity))
            .collect();
        out.sort();
        out
    }

    pub fn min_degree(&self) -> Int {
        self.entries
            .iter()
            .map(|e| e.degree.clone())
            .min()
            .expect("nonzero rank")
    }

    pub fn total_degree(&self) -> Int {
        self.entries.iter().map(|e| &e.degree * Int::from(e.multiplicity)).sum()
    }
}

/// Chain of partial sums of a decomposition ordered along a lex point.
struct LexChain<'a> {
    parts: Vec<(Vec<Rat>, &'a DecompositionPart)>,
    rank: usize,
}

impl<'a> LexChain<'a> {
    fn new(parts: &'a [DecompositionPart], key: impl Fn(&DualCharacter) -> Vec<Rat>, rank: usize) -> Self {
        let mut parts: Vec<(Vec<Rat>, &DecompositionPart)> = parts.iter().map(|p| (key(&p.character), p)).collect();
        parts.sort_by(|a, b| b.0.cmp(&a.0));
        Self { parts, rank }
    }

    /// Sum of the first `k` pieces.
    fn prefix(&self, k: usize) -> RationalSubspace {
        RationalSubspace::sum_all(self.rank, self.parts[..k].iter().map(|(_, p)| &p.space)).expect("same ambient")
    }
}

pub fn restrict_to_wall(b: &ToricVectorBundle, wall: &Wall) -> Result<CurveSplitting> {
    let fan = b.fan();
    let r = b.rank();
    let pf = fan.lex_point(wall, Side::First);
    let pg = fan.lex_point(wall, Side::Second);
    let f = LexChain::new(&b.decomposition(wall.first).parts, |u| pf.pair(u), r);
    let g = LexChain::new(&b.decomposition(wall.second).parts, |u| pg.pair(u), r);
    let fp: Vec<RationalSubspace> = (0..=f.parts.len()).map(|k| f.prefix(k)).collect();
    let gp: Vec<RationalSubspace> = (0..=g.parts.len()).map(|k| g.prefix(k)).collect();
    let meet_dim = |a: &RationalSubspace, c: &RationalSubspace| -> Result<i64> { Ok(a.meet(c)?.dim() as i64) };
    let mut entries = Vec::new();
    let mut total = 0usize;
    for i in 0..f.parts.len() {
        for j in 0..g.parts.len() {
            let m = meet_dim(&fp[i + 1], &gp[j + 1])? - meet_dim(&fp[i], &gp[j + 1])? - meet_dim(&fp[i + 1], &gp[j])?
                + meet_dim(&fp[i], &gp[j])?;
            if m < 0 {
                return Err(Error::InternalInconsistency(format!(
                    "negative matching multiplicity on wall ({}, {})",
                    wall.first, wall.second
                )));
            }
            if m == 0 {
                continue;
            }
            let u = f.parts[i].1.character.clone();
            let u_prime = g.parts[j].1.character.clone();
            let diff = &u - &u_prime;
            if wall.rays.iter().any(|&ray| !diff.pair(fan.ray(ray)).is_zero()) {
                return Err(Error::InternalInconsistency(format!(
                    "matched characters {u:?}, {u_prime:?} differ off the wall"
                )));
            }
            let degree = degree_along(&diff, &wall.normal);
            if !degree.is_integer() {
                return Err(Error::InternalInconsistency("fractional curve degree".into()));
            }
            total += m as usize;
            entries.push(SplitEntry {
                u,
                u_prime,
                multiplicity: m as usize,
                degree: degree.to_integer(),
            });
        }
    }
    if total != r {
        return Err(Error::InternalInconsistency(format!(
            "matching on wall ({}, {}) has total multiplicity {total}, rank {r}",
            wall.first, wall.second
        )));
    }
    entries.sort();
    Ok(CurveSplitting {
        wall: wall.clone(),
        entries,
    })
}

pub fn restrict_all(b: &ToricVectorBundle) -> Result<Vec<CurveSplitting>> {
    b.fan().walls().iter().map(|w| restrict_to_wall(b, w)).collect()
}

/// `r` global sections whose values at every fixed point form a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialityCertificate {
    pub sections: Vec<(DualCharacter, Vec<Rat>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub splittings: Vec<CurveSplitting>,
    pub tau_global: Int,
    /// Minimum degree over walls through each fixed point, by cone index.
    pub tau_at: Vec<Int>,
    pub nef: bool,
    pub ample: bool,
    pub trivial: bool,
    pub certificate: Option<TrivialityCertificate>,
}

pub fn positivity_report(b: &ToricVectorBundle) -> Result<PositivityReport> {
    report_from_splittings(b, restrict_all(b)?)
}

/// Assembles the report from per-wall splittings computed elsewhere (for
/// instance in parallel). The splittings must cover every wall.
pub fn report_from_splittings(b: &ToricVectorBundle, splittings: Vec<CurveSplitting>) -> Result<PositivityReport> {
    let fan = b.fan();
    if splittings.is_empty() {
        return Err(Error::InvalidInput("fan has no walls".into()));
    }
    let tau_global = splittings
        .iter()
        .map(CurveSplitting::min_degree)
        .min()
        .expect("nonempty");
    let mut tau_at = Vec::with_capacity(fan.num_cones());
    for c in 0..fan.num_cones() {
        let t = splittings
            .iter()
            .filter(|s| s.wall.first == c || s.wall.second == c)
            .map(CurveSplitting::min_degree)
            .min()
            .ok_or_else(|| Error::InvalidInput(format!("cone {c} has no walls")))?;
        tau_at.push(t);
    }
    let trivial = splittings.iter().all(|s| s.entries.iter().all(|e| e.degree.is_zero()));
    let certificate = if trivial {
        Some(triviality_certificate(b)?)
    } else {
        None
    };
    Ok(PositivityReport {
        nef: !tau_global.is_negative(),
        ample: tau_global.is_positive(),
        tau_global,
        tau_at,
        splittings,
        trivial,
        certificate,
    })
}

fn triviality_certificate(b: &ToricVectorBundle) -> Result<TrivialityCertificate> {
    let r = b.rank();
    let mut sections: Vec<(DualCharacter, Vec<Rat>)> = Vec::new();
    let mut values: Vec<Vec<Rat>> = Vec::new();
    for part in &b.decomposition(0).parts {
        let space = isotypical_sections(b, &part.character);
        for s in space.space.basis() {
            let v = b.fiber_evaluation(0, &part.character, s)?;
            values.push(v);
            if rank(&values) == sections.len() + 1 {
                sections.push((part.character.clone(), s.clone()));
            } else {
                values.pop();
            }
        }
    }
    let invertible_everywhere = sections.len() == r
        && (0..b.fan().num_cones()).try_fold(true, |ok, c| -> Result<bool> {
            let vals = sections
                .iter()
                .map(|(u, s)| b.fiber_evaluation(c, u, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(ok && rank(&vals) == r)
        })?;
    if !invertible_everywhere {
        return Err(Error::TheoremViolation(
            "all curve degrees vanish but no trivialising sections were found".into(),
        ));
    }
    Ok(TrivialityCertificate { sections })
}

/// `ε(E, x) = τ(E, x)` at the fixed point of `cone`, or the global constant.
pub fn seshadri(b: &ToricVectorBundle, at: Option<usize>) -> Result<Int> {
    if !b.fan().is_smooth() {
        return Err(Error::NotSmooth);
    }
    let report = positivity_report(b)?;
    if !report.nef {
        return Err(Error::NotNef);
    }
    match at {
        None => Ok(report.tau_global),
        Some(c) => report
            .tau_at
            .get(c)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("no maximal cone {c}"))),
    }
}

/// A bundle together with a Q-divisor class `δ`, written `E⟨δ⟩`.
#[derive(Clone, Debug)]
pub struct QTwistedBundle {
    pub bundle: ToricVectorBundle,
    pub delta: TCartierDivisor,
}

impl QTwistedBundle {
    pub fn new(bundle: ToricVectorBundle, delta: TCartierDivisor) -> Result<Self> {
        if !same_fan(bundle.fan(), delta.fan()) {
            return Err(Error::InvalidInput("twist lives on a different fan".into()));
        }
        Ok(Self { bundle, delta })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPositivityReport {
    /// Per wall, the twisted degrees with multiplicities.
    pub walls: Vec<(Wall, Vec<(Rat, usize)>)>,
    pub tau_global: Rat,
    pub tau_at: Vec<Rat>,
    pub nef: bool,
    pub ample: bool,
}

pub fn qtwist_positivity(q: &QTwistedBundle) -> Result<QPositivityReport> {
    let splittings = restrict_all(&q.bundle)?;
    let walls: Vec<(Wall, Vec<(Rat, usize)>)> = splittings
        .into_iter()
        .map(|s| {
            let shift = q.delta.wall_degree(&s.wall);
            let degs = s
                .entries
                .iter()
                .map(|e| (Rat::from_integer(e.degree.clone()) + &shift, e.multiplicity))
                .collect();
            (s.wall, degs)
        })
        .collect();
    let min_of = |ds: &Vec<(Rat, usize)>| ds.iter().map(|(d, _)| d.clone()).min().expect("nonzero rank");
    let tau_global = walls
        .iter()
        .map(|(_, d)| min_of(d))
        .min()
        .ok_or_else(|| Error::InvalidInput("fan has no walls".into()))?;
    let fan = q.bundle.fan();
    let tau_at = (0..fan.num_cones())
        .map(|c| {
            walls
                .iter()
                .filter(|(w, _)| w.first == c || w.second == c)
                .map(|(_, d)| min_of(d))
                .min()
                .ok_or_else(|| Error::InvalidInput(format!("cone {c} has no walls")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QPositivityReport {
        nef: !tau_global.is_negative(),
        ample: tau_global.is_positive(),
        tau_global,
        tau_at,
        walls,
    })
}

#[derive(Clone, Debug)]
pub struct Blowup {
    /// `p^*E ⊗ O(-mF)`.
    pub bundle: ToricVectorBundle,
    pub subdivision: StarSubdivision,
    /// The divisor `O(-F)` on the blown-up fan.
    pub minus_exceptional: TCartierDivisor,
}

/// Blowup at the fixed point of a smooth cone, pulled back and twisted by
/// `O(-mF)`.
pub fn blowup_pullback(b: &ToricVectorBundle, cone: usize, m: u32) -> Result<Blowup> {
    let sub = b.fan().star_subdivide(cone)?;
    let finer = Arc::new(sub.fan.clone());
    let pulled = b.subdivision_pullback(finer.clone())?;
    let mut values = alloc::vec![Rat::zero(); finer.rays().len()];
    values[sub.new_ray] = rat_frac(-1, 1);
    let minus_f = TCartierDivisor::from_ray_values(finer, &values)?;
    let bundle = if m == 0 {
        pulled
    } else {
        pulled.twist(&minus_f.scale(&Rat::from_integer(Int::from(m))))?
    };
    Ok(Blowup {
        bundle,
        subdivision: sub,
        minus_exceptional: minus_f,
    })
}

/// `sup{λ : p^*E⟨-λF⟩ nef}` from the affine dependence of each twisted
/// degree on `λ`, confirmed by evaluating the twist at `λ` and `λ + 1/2`.
pub fn seshadri_via_blowup(b: &ToricVectorBundle, cone: usize) -> Result<Rat> {
    let bl = blowup_pullback(b, cone, 0)?;
    let splittings = restrict_all(&bl.bundle)?;
    let mut sup: Option<Rat> = None;
    for s in &splittings {
        let c = bl.minus_exceptional.wall_degree(&s.wall);
        if c.is_negative() {
            let bound = Rat::from_integer(s.min_degree()) / -c;
            sup = Some(match sup {
                Some(x) if x <= bound => x,
                _ => bound,
            });
        }
    }
    let lambda = sup.ok_or_else(|| Error::InternalInconsistency("no curve through the blown-up point".into()))?;
    let at = |l: &Rat| -> Result<bool> {
        let q = QTwistedBundle::new(bl.bundle.clone(), bl.minus_exceptional.scale(l))?;
        Ok(qtwist_positivity(&q)?.nef)
    };
    if !at(&lambda)? || at(&(&lambda + rat_frac(1, 2)))? {
        return Err(Error::InternalInconsistency(
            "twisted nef threshold is not where the degrees put it".into(),
        ));
    }
    Ok(lambda)
}
