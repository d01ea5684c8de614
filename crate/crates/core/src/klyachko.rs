//! Toric vector bundles as Klyachko data: a rational vector space `E` with
//! one decreasing integer filtration per ray.
//!
//! A bundle is validated at construction by decomposing `E` over every
//! maximal cone; the decompositions are kept and reused.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::divisor::{same_fan, TCartierDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, LexPoint};
use crate::geometry::{solve_character, DualCharacter, LatticeVector};
use crate::linalg::{self, ceil, determinant, rank, Int, Rat, RationalSubspace};
use crate::util::combinations;

/// A decreasing filtration `E(i)` of `Q^r`, stored by its jumps.
///
/// `steps` is a list `(i_k, V_k)` with increasing thresholds and strictly
/// decreasing nonzero subspaces; `E(t) = V_k` for the least `k` with
/// `t <= i_k`, and `E(t) = 0` past the last threshold. `V_0` is all of `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    ambient: usize,
    steps: Vec<(Int, RationalSubspace)>,
}

impl Filtration {
    pub fn new(ambient: usize, mut steps: Vec<(Int, RationalSubspace)>) -> Result<Self> {
        steps.sort_by(|a, b| a.0.cmp(&b.0));
        for w in steps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidKlyachkoData(format!("threshold {} listed twice", w[0].0)));
            }
        }
        for (_, v) in &steps {
            if v.ambient() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.ambient(),
                });
            }
        }
        steps.retain(|(_, v)| !v.is_zero());
        for w in steps.windows(2) {
            if !w[1].1.is_subspace_of(&w[0].1) {
                return Err(Error::InvalidKlyachkoData(format!(
                    "filtration is not decreasing at threshold {}",
                    w[1].0
                )));
            }
        }
        let mut reduced: Vec<(Int, RationalSubspace)> = Vec::with_capacity(steps.len());
        for (i, v) in steps.into_iter().rev() {
            if reduced.last().is_some_and(|(_, w)| *w == v) {
                continue;
            }
            reduced.push((i, v));
        }
        reduced.reverse();
        match reduced.first() {
            Some((_, v)) if v.is_full() => {}
            _ => {
                return Err(Error::InvalidKlyachkoData(
                    "filtration does not start with the whole space".into(),
                ))
            }
        }
        Ok(Self {
            ambient,
            steps: reduced,
        })
    }

    /// `E(t) = E` for `t <= threshold` and zero above.
    pub fn single_jump(ambient: usize, threshold: Int) -> Self {
        Self {
            ambient,
            steps: vec![(threshold, RationalSubspace::full(ambient))],
        }
    }

    /// `E(t) = Σ { L : value(L) >= t }` for a graded decomposition.
    pub fn from_graded(ambient: usize, parts: &[(Int, &RationalSubspace)]) -> Result<Self> {
        let mut thresholds: Vec<Int> = parts.iter().map(|(i, _)| i.clone()).collect();
        thresholds.sort();
        thresholds.dedup();
        let mut steps = Vec::with_capacity(thresholds.len());
        for t in thresholds {
            let v = RationalSubspace::sum_all(ambient, parts.iter().filter(|(i, _)| *i >= t).map(|(_, l)| *l))?;
            steps.push((t, v));
        }
        Self::new(ambient, steps)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn steps(&self) -> &[(Int, RationalSubspace)] {
        &self.steps
    }

    pub fn thresholds(&self) -> Vec<Int> {
        self.steps.iter().map(|(i, _)| i.clone()).collect()
    }

    pub fn max_jump(&self) -> Int {
        self.steps.last().map(|(i, _)| i.clone()).expect("nonempty filtration")
    }

    pub fn at(&self, t: &Int) -> RationalSubspace {
        self.steps
            .iter()
            .find(|(i, _)| t <= i)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| RationalSubspace::zero(self.ambient))
    }

    pub fn at_rat(&self, t: &Rat) -> RationalSubspace {
        self.at(&ceil(t))
    }

    pub fn shift(&self, j: &Int) -> Self {
        Self {
            ambient: self.ambient,
            steps: self.steps.iter().map(|(i, v)| (i + j, v.clone())).collect(),
        }
    }

    pub fn scale_thresholds(&self, q: &Int) -> Self {
        Self {
            ambient: self.ambient,
            steps: self.steps.iter().map(|(i, v)| (i * q, v.clone())).collect(),
        }
    }

    pub fn image(&self, g: &[Vec<Rat>]) -> Self {
        Self {
            ambient: self.ambient,
            steps: self.steps.iter().map(|(i, v)| (i.clone(), v.image(g))).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut thresholds: Vec<Int> = self.thresholds();
        thresholds.extend(other.thresholds());
        thresholds.sort();
        thresholds.dedup();
        let steps = thresholds
            .into_iter()
            .map(|t| {
                let v = self.at(&t).direct_sum(&other.at(&t));
                (t, v)
            })
            .collect();
        Self::new(self.ambient + other.ambient, steps).expect("sum of filtrations is a filtration")
    }

    /// Jump of the determinant line: `Σ i · dim gr_i`.
    pub fn determinant_jump(&self) -> Int {
        let mut total = Int::zero();
        for (k, (i, v)) in self.steps.iter().enumerate() {
            let next = self.steps.get(k + 1).map_or(0, |(_, w)| w.dim());
            total += i * Int::from(v.dim() - next);
        }
        total
    }
}

/// One isotypical piece `L_u` of a cone decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPart {
    pub character: DualCharacter,
    pub space: RationalSubspace,
    /// Basis of `space` chosen during the greedy pass.
    pub basis: Vec<Vec<Rat>>,
}

/// `E = ⊕ L_u` over a maximal cone, parts in decreasing order along the
/// cone's interior point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub cone: usize,
    pub parts: Vec<DecompositionPart>,
}

impl ConeDecomposition {
    /// Characters repeated by multiplicity, sorted.
    pub fn characters(&self) -> Vec<DualCharacter> {
        let mut out: Vec<DualCharacter> = self
            .parts
            .iter()
            .flat_map(|p| core::iter::repeat_n(p.character.clone(), p.space.dim()))
            .collect();
        out.sort();
        out
    }

    pub fn part(&self, u: &DualCharacter) -> Option<&DecompositionPart> {
        self.parts.iter().find(|p| p.character == *u)
    }

    pub fn sum_where(&self, ambient: usize, pred: impl Fn(&DualCharacter) -> bool) -> RationalSubspace {
        RationalSubspace::sum_all(
            ambient,
            self.parts.iter().filter(|p| pred(&p.character)).map(|p| &p.space),
        )
        .expect("parts share the ambient space")
    }
}

#[derive(Clone, Debug)]
pub struct ToricVectorBundle {
    fan: Arc<Fan>,
    rank: usize,
    filtrations: Vec<Filtration>,
    decompositions: Vec<ConeDecomposition>,
}

impl PartialEq for ToricVectorBundle {
    fn eq(&self, other: &Self) -> bool {
        same_fan(&self.fan, &other.fan) && self.rank == other.rank && self.filtrations == other.filtrations
    }
}

impl Eq for ToricVectorBundle {}

impl ToricVectorBundle {
    pub fn new(fan: Arc<Fan>, rank: usize, filtrations: Vec<Filtration>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("bundle rank must be positive".into()));
        }
        if filtrations.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch {
                expected: fan.rays().len(),
                found: filtrations.len(),
            });
        }
        if let Some(f) = filtrations.iter().find(|f| f.ambient() != rank) {
            return Err(Error::RankMismatch {
                expected: rank,
                found: f.ambient(),
            });
        }
        let decompositions = (0..fan.num_cones())
            .map(|c| decompose(&fan, rank, &filtrations, c, &|_| 0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            fan,
            rank,
            filtrations,
            decompositions,
        })
    }

    pub fn trivial(fan: Arc<Fan>, rank: usize) -> Result<Self> {
        let filtrations = (0..fan.rays().len())
            .map(|_| Filtration::single_jump(rank, Int::zero()))
            .collect();
        Self::new(fan, rank, filtrations)
    }

    /// Rank-one data of a line bundle: jump `<u_σ, v_ρ>` on each ray.
    pub fn from_divisor(d: &TCartierDivisor) -> Result<Self> {
        if d.is_rational() {
            return Err(Error::NonIntegral);
        }
        let filtrations = d
            .ray_values()
            .iter()
            .map(|j| Filtration::single_jump(1, j.to_integer()))
            .collect();
        Self::new(d.fan().clone(), 1, filtrations)
    }

    /// `E = N_Q`, `E^ρ(i)` is `E` for `i <= 0`, `span(v_ρ)` for `i = 1`,
    /// zero above.
    pub fn tangent(fan: Arc<Fan>) -> Result<Self> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        let n = fan.rank();
        let filtrations = fan
            .rays()
            .iter()
            .map(|v| {
                let line = RationalSubspace::span(n, &[v.to_rat()])?;
                Filtration::new(n, vec![(Int::zero(), RationalSubspace::full(n)), (Int::one(), line)])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(fan, n, filtrations)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn filtrations(&self) -> &[Filtration] {
        &self.filtrations
    }

    pub fn filtration(&self, ray: usize) -> &Filtration {
        &self.filtrations[ray]
    }

    pub fn decomposition(&self, cone: usize) -> &ConeDecomposition {
        &self.decompositions[cone]
    }

    pub fn decompositions(&self) -> &[ConeDecomposition] {
        &self.decompositions
    }

    /// Recomputes the decomposition of `cone`, breaking ties in the greedy
    /// order by `key` (larger first).
    pub fn decompose_with_order(&self, cone: usize, key: &dyn Fn(&DualCharacter) -> u64) -> Result<ConeDecomposition> {
        decompose(&self.fan, self.rank, &self.filtrations, cone, key)
    }

    /// `E^σ_u = ⋂_{ρ ⊂ σ} E^ρ(<u, v_ρ>)`.
    pub fn cone_space(&self, cone: usize, u: &DualCharacter) -> RationalSubspace {
        cone_space(&self.fan, self.rank, &self.filtrations, cone, u)
    }

    pub fn interpolate(&self, v: &[Rat], t: &Rat) -> Result<RationalSubspace> {
        let cone = self.fan.cone_containing(v).ok_or(Error::PointOutsideSupport)?;
        self.interpolate_in_cone(cone, v, t)
    }

    /// `E^v(t)` computed from the decomposition of the given cone.
    pub fn interpolate_in_cone(&self, cone: usize, v: &[Rat], t: &Rat) -> Result<RationalSubspace> {
        if v.len() != self.fan.rank() {
            return Err(Error::RankMismatch {
                expected: self.fan.rank(),
                found: v.len(),
            });
        }
        if !self.fan.cone(cone).contains_rat(v) {
            return Err(Error::PointOutsideSupport);
        }
        Ok(self.decompositions[cone].sum_where(self.rank, |u| u.pair_rat(v) >= *t))
    }

    /// The maximal cone containing `base + ε d_1 + ε² d_2 + …` for small ε.
    pub fn lex_cone(&self, p: &LexPoint) -> Result<usize> {
        (0..self.fan.num_cones())
            .find(|&c| {
                self.fan.cone(c).facet_normals().iter().all(|f| {
                    p.pair(f)
                        .into_iter()
                        .find(|x| !x.is_zero())
                        .is_none_or(|x| x.is_positive())
                })
            })
            .ok_or(Error::PointOutsideSupport)
    }

    /// `E^p(t)` at a lexicographic point, comparing pairing tuples.
    pub fn interpolate_lex(&self, p: &LexPoint, t: &[Rat]) -> Result<RationalSubspace> {
        let cone = self.lex_cone(p)?;
        Ok(self.decompositions[cone].sum_where(self.rank, |u| p.pair(u).as_slice() >= t))
    }

    pub fn twist(&self, d: &TCartierDivisor) -> Result<Self> {
        if !same_fan(&self.fan, d.fan()) {
            return Err(Error::InvalidInput("divisor lives on a different fan".into()));
        }
        if d.is_rational() {
            return Err(Error::NonIntegral);
        }
        let filtrations = self
            .filtrations
            .iter()
            .zip(d.ray_values())
            .map(|(f, j)| f.shift(&j.to_integer()))
            .collect();
        Self::new(self.fan.clone(), self.rank, filtrations)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(Error::InvalidInput("bundles live on different fans".into()));
        }
        let filtrations = self
            .filtrations
            .iter()
            .zip(&other.filtrations)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::new(self.fan.clone(), self.rank + other.rank, filtrations)
    }

    pub fn determinant(&self) -> Result<TCartierDivisor> {
        let u = self
            .decompositions
            .iter()
            .map(|d| {
                d.parts.iter().fold(DualCharacter::zero(self.fan.rank()), |acc, p| {
                    &acc + &p.character.scale(&Rat::from_integer(Int::from(p.space.dim())))
                })
            })
            .collect();
        let det = TCartierDivisor::new(self.fan.clone(), u)?;
        let direct: Vec<Rat> = self
            .filtrations
            .iter()
            .map(|f| Rat::from_integer(f.determinant_jump()))
            .collect();
        if det.ray_values() != direct {
            return Err(Error::InternalInconsistency("determinant jumps disagree".into()));
        }
        Ok(det)
    }

    pub fn frobenius_pullback(&self, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("Frobenius exponent must be positive".into()));
        }
        let q = Int::from(q);
        let filtrations = self.filtrations.iter().map(|f| f.scale_thresholds(&q)).collect();
        Self::new(self.fan.clone(), self.rank, filtrations)
    }

    /// Pullback along a refinement: old rays keep their filtrations, new
    /// rays get the interpolated filtration.
    pub fn subdivision_pullback(&self, finer: Arc<Fan>) -> Result<Self> {
        if finer.rank() != self.fan.rank() {
            return Err(Error::RankMismatch {
                expected: self.fan.rank(),
                found: finer.rank(),
            });
        }
        for c in 0..finer.num_cones() {
            if self.fan.containing_cone_of(&finer, c).is_none() {
                return Err(Error::NotARefinement(format!(
                    "cone {c} lies in no cone of the coarser fan"
                )));
            }
        }
        let mut filtrations = Vec::with_capacity(finer.rays().len());
        for w in finer.rays() {
            if let Some(r) = self.fan.rays().iter().position(|v| v == w) {
                filtrations.push(self.filtrations[r].clone());
                continue;
            }
            let wr = w.to_rat();
            let cone = self.fan.cone_containing(&wr).ok_or(Error::PointOutsideSupport)?;
            let graded: Vec<(Int, &RationalSubspace)> = self.decompositions[cone]
                .parts
                .iter()
                .map(|p| (p.character.pair(w).to_integer(), &p.space))
                .collect();
            filtrations.push(Filtration::from_graded(self.rank, &graded)?);
        }
        Self::new(finer, self.rank, filtrations)
    }

    /// The same bundle with `E` re-coordinatised by an invertible matrix.
    pub fn change_basis(&self, g: &[Vec<Rat>]) -> Result<Self> {
        if g.len() != self.rank || g.iter().any(|row| row.len() != self.rank) {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: g.len(),
            });
        }
        if determinant(g).is_zero() {
            return Err(Error::InvalidInput("basis change is singular".into()));
        }
        let filtrations = self.filtrations.iter().map(|f| f.image(g)).collect();
        Self::new(self.fan.clone(), self.rank, filtrations)
    }

    /// Value at `x_σ` of the `χ^u`-isotypical section germ `s`: the
    /// projection of `s` onto `L_u` along the other summands.
    pub fn fiber_evaluation(&self, cone: usize, u: &DualCharacter, s: &[Rat]) -> Result<Vec<Rat>> {
        if s.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: s.len(),
            });
        }
        if u.rank() != self.fan.rank() || !u.is_integral() || !self.cone_space(cone, u).contains(s) {
            return Err(Error::NotASection);
        }
        let dec = &self.decompositions[cone];
        let columns: Vec<(&DualCharacter, &Vec<Rat>)> = dec
            .parts
            .iter()
            .flat_map(|p| p.basis.iter().map(move |b| (&p.character, b)))
            .collect();
        let matrix: Vec<Vec<Rat>> = (0..self.rank)
            .map(|i| columns.iter().map(|(_, b)| b[i].clone()).collect())
            .collect();
        let coeffs = linalg::solve(&matrix, s)
            .ok_or_else(|| Error::InternalInconsistency("decomposition does not span E".into()))?;
        let mut out = vec![Rat::zero(); self.rank];
        for ((c, b), x) in columns.iter().zip(&coeffs) {
            if *c == u {
                for (o, bi) in out.iter_mut().zip(b.iter()) {
                    *o += x * bi;
                }
            }
        }
        Ok(out)
    }
}

fn cone_space(fan: &Fan, rank: usize, filtrations: &[Filtration], cone: usize, u: &DualCharacter) -> RationalSubspace {
    let spaces: Vec<RationalSubspace> = fan
        .cone_rays(cone)
        .iter()
        .map(|&r| filtrations[r].at_rat(&u.pair(fan.ray(r))))
        .collect();
    RationalSubspace::meet_all(rank, &spaces).expect("filtrations share the ambient space")
}

/// Characters `u` with `<u, v_ρ>` a jump of every ray `ρ` of the cone.
fn candidate_characters(fan: &Fan, filtrations: &[Filtration], cone: usize) -> Vec<DualCharacter> {
    let n = fan.rank();
    let rays = fan.cone_rays(cone);
    let vecs: Vec<Vec<Rat>> = rays.iter().map(|&r| fan.ray(r).to_rat()).collect();
    let Some(basis) = combinations(rays.len(), n)
        .into_iter()
        .find(|s| rank(&s.iter().map(|&i| vecs[i].clone()).collect::<Vec<_>>()) == n)
    else {
        return Vec::new();
    };
    let chosen: Vec<LatticeVector> = basis.iter().map(|&i| fan.ray(rays[i]).clone()).collect();
    let options: Vec<Vec<Int>> = basis.iter().map(|&i| filtrations[rays[i]].thresholds()).collect();
    let mut out: Vec<DualCharacter> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let jumps: Vec<Int> = idx.iter().zip(&options).map(|(&k, o)| o[k].clone()).collect();
        if let Ok(u) = solve_character(&chosen, &jumps) {
            let consistent = rays.iter().all(|&r| {
                let t = u.pair(fan.ray(r)).to_integer();
                filtrations[r].steps().iter().any(|(i, _)| *i == t)
            });
            if consistent && !out.contains(&u) {
                out.push(u);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn decompose(
    fan: &Fan,
    rank: usize,
    filtrations: &[Filtration],
    cone: usize,
    key: &dyn Fn(&DualCharacter) -> u64,
) -> Result<ConeDecomposition> {
    let rays = fan.cone_rays(cone);
    let interior = fan.cone(cone).interior_point();
    let mut candidates = candidate_characters(fan, filtrations, cone);
    candidates.sort_by(|a, b| {
        b.pair(&interior)
            .cmp(&a.pair(&interior))
            .then_with(|| key(b).cmp(&key(a)))
            .then_with(|| b.cmp(a))
    });
    let spaces: Vec<RationalSubspace> = candidates
        .iter()
        .map(|u| cone_space(fan, rank, filtrations, cone, u))
        .collect();
    let dominates =
        |a: &DualCharacter, b: &DualCharacter| a != b && rays.iter().all(|&r| (a - b).pair(fan.ray(r)) >= Rat::zero());
    let mut accumulated = RationalSubspace::zero(rank);
    let mut parts = Vec::new();
    for (k, u) in candidates.iter().enumerate() {
        let above = RationalSubspace::sum_all(
            rank,
            candidates
                .iter()
                .zip(&spaces)
                .filter(|(v, _)| dominates(v, u))
                .map(|(_, s)| s),
        )?;
        let m = spaces[k].dim() - spaces[k].meet(&above)?.dim();
        if m == 0 {
            continue;
        }
        let basis = spaces[k].complement_over(&accumulated);
        if basis.len() != m {
            return Err(Error::InvalidKlyachkoData(format!(
                "cone {cone}: character {u:?} has multiplicity {m} but {} new directions",
                basis.len()
            )));
        }
        let space = RationalSubspace::span(rank, &basis)?;
        accumulated = accumulated.sum(&space)?;
        parts.push(DecompositionPart {
            character: u.clone(),
            space,
            basis,
        });
    }
    let dec = ConeDecomposition { cone, parts };
    verify_decomposition(fan, rank, filtrations, &dec)?;
    Ok(dec)
}

fn verify_decomposition(fan: &Fan, rank: usize, filtrations: &[Filtration], dec: &ConeDecomposition) -> Result<()> {
    let total: usize = dec.parts.iter().map(|p| p.space.dim()).sum();
    if total != rank || dec.sum_where(rank, |_| true).dim() != rank {
        return Err(Error::InvalidKlyachkoData(format!(
            "cone {}: the graded pieces do not form a direct sum decomposition of E",
            dec.cone
        )));
    }
    for &r in fan.cone_rays(dec.cone) {
        let f = &filtrations[r];
        let mut checks = f.thresholds();
        checks.push(f.max_jump() + Int::one());
        for t in checks {
            let tr = Rat::from_integer(t.clone());
            let lhs = dec.sum_where(rank, |u| u.pair(fan.ray(r)) >= tr);
            if lhs != f.at(&t) {
                return Err(Error::InvalidKlyachkoData(format!(
                    "cone {}: ray {r} is not compatible at threshold {t}",
                    dec.cone
                )));
            }
        }
    }
    Ok(())
}

/// Compares two characters along a lexicographic point.
pub fn lex_cmp(p: &LexPoint, a: &DualCharacter, b: &DualCharacter) -> Ordering {
    p.pair(a).cmp(&p.pair(b))
}
