//! Complete fans, their walls, star subdivisions, and lexicographic
//! evaluation points next to a wall.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::geometry::{Cone, DualCharacter, LatticeVector};
use crate::linalg::{self, nullspace, primitive_integer, rank, Int, Rat};
use crate::util::combinations;

const SAMPLE_SEED: u64 = 0x746f_7269_706f_7321;
const RANDOM_SAMPLES: usize = 1200;
const SAMPLE_RANGE: u32 = 41;

/// A fan given by its rays and full-dimensional maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
    cone_data: Vec<Cone>,
}

/// Codimension-one intersection of two maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Lower cone index.
    pub first: usize,
    pub second: usize,
    /// Rays spanning the wall.
    pub rays: Vec<usize>,
    /// Primitive generator of the wall's orthogonal complement, positive on
    /// the first cone.
    pub normal: DualCharacter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    NotAFan(String),
    IncompleteSupport(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    /// `Some` when completeness was asked for.
    pub complete: Option<bool>,
    /// Completeness is established by a sampling heuristic together with the
    /// two-cones-per-wall condition, not by an exact cover test.
    pub heuristic_completeness: bool,
    pub sampled_directions: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        let mut not_a_fan = Vec::new();
        let mut incomplete = Vec::new();
        for f in self.failures {
            match f {
                ValidationFailure::NotAFan(m) => not_a_fan.push(m),
                ValidationFailure::IncompleteSupport(m) => incomplete.push(m),
            }
        }
        if !not_a_fan.is_empty() {
            return Err(Error::NotAFan(not_a_fan.join("; ")));
        }
        if !incomplete.is_empty() {
            return Err(Error::IncompleteSupport(incomplete.join("; ")));
        }
        Ok(())
    }
}

/// Result of replacing a smooth maximal cone by its star subdivision.
#[derive(Clone, Debug)]
pub struct StarSubdivision {
    pub fan: Fan,
    pub new_ray: usize,
    /// For each new cone: its index and the index of the original generator
    /// it omits.
    pub new_cones: Vec<(usize, usize)>,
}

impl Fan {
    /// Checks shape only: ranks, primitive distinct rays, valid indices and
    /// full-dimensional cones. Use [`Fan::validate`] for the fan axioms.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("fan rank must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if r.is_zero() {
                return Err(Error::ZeroVector);
            }
            if !r.is_primitive() {
                return Err(Error::InvalidInput(format!("ray {i} {r:?} is not primitive")));
            }
            if rays[..i].contains(r) {
                return Err(Error::InvalidInput(format!("ray {i} {r:?} is repeated")));
            }
        }
        if cones.is_empty() {
            return Err(Error::InvalidInput("fan has no maximal cones".into()));
        }
        let mut sorted = Vec::with_capacity(cones.len());
        let mut cone_data = Vec::with_capacity(cones.len());
        for (ci, c) in cones.iter().enumerate() {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!("cone {ci} refers to missing ray {bad}")));
            }
            let gens: Vec<LatticeVector> = c.iter().map(|&i| rays[i].clone()).collect();
            let cone = Cone::from_generators_unchecked(rank, gens);
            if !cone.is_full_dimensional() {
                return Err(Error::NotAFan(format!("maximal cone {ci} is not full-dimensional")));
            }
            sorted.push(c);
            cone_data.push(cone);
        }
        Ok(Self {
            rank,
            rays,
            cones: sorted,
            cone_data,
        })
    }

    /// [`Fan::new`] followed by validation.
    pub fn checked(
        rank: usize,
        rays: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
        assert_complete: bool,
    ) -> Result<Self> {
        let fan = Self::new(rank, rays, cones)?;
        fan.validate(assert_complete).into_result()?;
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cone_data[i]
    }

    pub fn cone_rays(&self, i: usize) -> &[usize] {
        &self.cones[i]
    }

    pub fn is_smooth(&self) -> bool {
        self.cone_data.iter().all(Cone::is_smooth)
    }

    /// First maximal cone containing `x`.
    pub fn cone_containing(&self, x: &[Rat]) -> Option<usize> {
        self.cone_data.iter().position(|c| c.contains_rat(x))
    }

    /// Ray indices of each facet of maximal cone `i`.
    fn facet_ray_sets(&self, i: usize) -> Vec<Vec<usize>> {
        let cone = &self.cone_data[i];
        cone.facet_normals()
            .iter()
            .map(|a| {
                self.cones[i]
                    .iter()
                    .copied()
                    .filter(|&r| a.pair(&self.rays[r]).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Whether the ray set `face` spans a face of maximal cone `i`.
    fn is_face(&self, i: usize, face: &[usize]) -> bool {
        let cone = &self.cone_data[i];
        let tight: Vec<&DualCharacter> = cone
            .facet_normals()
            .iter()
            .filter(|a| face.iter().all(|&r| a.pair(&self.rays[r]).is_zero()))
            .collect();
        let closure: Vec<usize> = self.cones[i]
            .iter()
            .copied()
            .filter(|&r| tight.iter().all(|a| a.pair(&self.rays[r]).is_zero()))
            .collect();
        closure == face
    }

    /// Checks that `σ_i ∩ σ_j` is the cone on their common rays.
    fn intersection_is_common_face(&self, i: usize, j: usize, common: &[usize]) -> bool {
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for c in [i, j] {
            for a in self.cone_data[c].facet_normals() {
                let r = a.coords().to_vec();
                if !rows.contains(&r) {
                    rows.push(r);
                }
            }
        }
        let face = Cone::from_generators_unchecked(self.rank, common.iter().map(|&r| self.rays[r].clone()).collect());
        for subset in combinations(rows.len(), self.rank - 1) {
            let sys: Vec<Vec<Rat>> = subset.iter().map(|&k| rows[k].clone()).collect();
            let ns = if sys.is_empty() {
                nullspace(&[], self.rank)
            } else {
                if rank(&sys) != self.rank - 1 {
                    continue;
                }
                nullspace(&sys, self.rank)
            };
            if ns.len() != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r: Vec<Rat> = ns[0].iter().map(|x| x * linalg::rat(sign)).collect();
                if rows.iter().all(|a| !linalg::dot(a, &r).is_negative()) && !face.contains_rat(&r) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the fan axioms and, optionally, completeness.
    pub fn validate(&self, assert_complete: bool) -> ValidationReport {
        let mut failures = Vec::new();
        for (ci, c) in self.cones.iter().enumerate() {
            let reduced = Cone::new(self.rank, &c.iter().map(|&r| self.rays[r].clone()).collect::<Vec<_>>());
            match reduced {
                Ok(r) if r.generators().len() == c.len() => {}
                _ => failures.push(ValidationFailure::NotAFan(format!(
                    "maximal cone {ci} lists a ray that is not extremal"
                ))),
            }
        }
        for (ri, _) in self.rays.iter().enumerate() {
            if !self.cones.iter().any(|c| c.contains(&ri)) {
                failures.push(ValidationFailure::NotAFan(format!(
                    "ray {ri} belongs to no maximal cone"
                )));
            }
        }
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[i]
                    .iter()
                    .copied()
                    .filter(|r| self.cones[j].contains(r))
                    .collect();
                if common.len() == self.cones[i].len() && common.len() == self.cones[j].len() {
                    failures.push(ValidationFailure::NotAFan(format!(
                        "maximal cones {i} and {j} coincide"
                    )));
                    continue;
                }
                if !self.is_face(i, &common) || !self.is_face(j, &common) {
                    failures.push(ValidationFailure::NotAFan(format!(
                        "common rays of cones {i} and {j} do not span a common face"
                    )));
                    continue;
                }
                if !self.intersection_is_common_face(i, j, &common) {
                    failures.push(ValidationFailure::NotAFan(format!(
                        "cones {i} and {j} overlap beyond a common face"
                    )));
                }
            }
        }
        let mut complete = None;
        let mut sampled = 0;
        if assert_complete {
            let before = failures.len();
            for i in 0..self.cones.len() {
                for facet in self.facet_ray_sets(i) {
                    let count = (0..self.cones.len())
                        .filter(|&k| self.facet_ray_sets(k).contains(&facet))
                        .count();
                    if count != 2 {
                        failures.push(ValidationFailure::IncompleteSupport(format!(
                            "facet {facet:?} of cone {i} lies in {count} maximal cone(s)"
                        )));
                    }
                }
            }
            for d in sample_directions(self.rank) {
                sampled += 1;
                if self.cone_containing(&d).is_none() {
                    failures.push(ValidationFailure::IncompleteSupport(format!(
                        "direction {:?} is not covered",
                        DualCharacter::new(d)
                    )));
                    break;
                }
            }
            failures.dedup();
            complete = Some(failures.len() == before);
        }
        ValidationReport {
            failures,
            complete,
            heuristic_completeness: assert_complete,
            sampled_directions: sampled,
        }
    }

    /// One wall per codimension-one cone shared by two maximal cones,
    /// ordered by cone indices.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out = Vec::new();
        for i in 0..self.cones.len() {
            let facets_i = self.facet_ray_sets(i);
            for j in i + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[i]
                    .iter()
                    .copied()
                    .filter(|r| self.cones[j].contains(r))
                    .collect();
                if !facets_i.contains(&common) || !self.facet_ray_sets(j).contains(&common) {
                    continue;
                }
                let rows: Vec<Vec<Rat>> = common.iter().map(|&r| self.rays[r].to_rat()).collect();
                if rank(&rows) != self.rank - 1 {
                    continue;
                }
                let ns = nullspace(&rows, self.rank);
                let Some(p) = primitive_integer(&ns[0]) else {
                    continue;
                };
                let mut normal = DualCharacter::from_ints(&p);
                if normal.pair(&self.cone_data[i].interior_point()).is_negative() {
                    normal = -&normal;
                }
                out.push(Wall {
                    first: i,
                    second: j,
                    rays: common,
                    normal,
                });
            }
        }
        out
    }

    /// Walls having cone `c` on one side.
    pub fn walls_of_cone(&self, c: usize) -> Vec<Wall> {
        self.walls()
            .into_iter()
            .filter(|w| w.first == c || w.second == c)
            .collect()
    }

    /// Star subdivision of a smooth maximal cone at the sum of its
    /// generators. The new ray is appended; cone `sigma`'s slot receives the
    /// first new cone and the others are appended.
    pub fn star_subdivide(&self, sigma: usize) -> Result<StarSubdivision> {
        if sigma >= self.cones.len() {
            return Err(Error::InvalidInput(format!("no maximal cone {sigma}")));
        }
        let cone = &self.cone_data[sigma];
        if self.rank < 2 || !cone.is_smooth() {
            return Err(Error::NotSmoothCone(sigma));
        }
        let v0 = cone.interior_point();
        let mut rays = self.rays.clone();
        rays.push(v0);
        let new_ray = rays.len() - 1;
        let gens = &self.cones[sigma];
        let mut cones = self.cones.clone();
        let mut new_cones = Vec::new();
        for (k, &omit) in gens.iter().enumerate() {
            let mut c: Vec<usize> = gens.iter().copied().filter(|&r| r != omit).collect();
            c.push(new_ray);
            if k == 0 {
                cones[sigma] = c;
                new_cones.push((sigma, omit));
            } else {
                cones.push(c);
                new_cones.push((cones.len() - 1, omit));
            }
        }
        let fan = Fan::new(self.rank, rays, cones)?;
        Ok(StarSubdivision {
            fan,
            new_ray,
            new_cones,
        })
    }

    /// Whether every maximal cone of `finer` lies in a maximal cone of self.
    pub fn containing_cone_of(&self, finer: &Fan, c: usize) -> Option<usize> {
        let gens = finer.cone(c).generators();
        (0..self.cones.len()).find(|&k| gens.iter().all(|g| self.cone_data[k].contains_rat(&g.to_rat())))
    }

    /// Lexicographic evaluation point on the chosen side of a wall.
    pub fn lex_point(&self, wall: &Wall, side: Side) -> LexPoint {
        let base = wall
            .rays
            .iter()
            .fold(LatticeVector::zero(self.rank), |acc, &r| &acc + &self.rays[r]);
        let mut directions = Vec::new();
        let mut span: Vec<Vec<Rat>> = Vec::new();
        if !base.is_zero() {
            span.push(base.to_rat());
        }
        for &r in &wall.rays {
            span.push(self.rays[r].to_rat());
            if rank(&span) == span.len() {
                directions.push(self.rays[r].clone());
            } else {
                span.pop();
            }
        }
        let cone = match side {
            Side::First => wall.first,
            Side::Second => wall.second,
        };
        let transverse = self.cone_data[cone].interior_point();
        let transverse_position = directions.len() + 1;
        directions.push(transverse);
        for i in 0..self.rank {
            directions.push(LatticeVector::unit(self.rank, i));
        }
        LexPoint {
            base,
            directions,
            transverse_position,
        }
    }
}

/// Deterministic probe directions for the completeness heuristic.
pub fn sample_directions(rank: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let unit = |i: usize, s: i64| {
        let mut v = alloc::vec![Rat::zero(); rank];
        v[i] = linalg::rat(s);
        v
    };
    let mut signed_units = Vec::new();
    for i in 0..rank {
        for s in [1, -1] {
            signed_units.push(unit(i, s));
        }
    }
    out.extend(signed_units.iter().cloned());
    for a in 0..signed_units.len() {
        for b in a + 1..signed_units.len() {
            let v: Vec<Rat> = signed_units[a]
                .iter()
                .zip(&signed_units[b])
                .map(|(x, y)| x + y)
                .collect();
            if !linalg::is_zero_vec(&v) {
                out.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let half = (SAMPLE_RANGE / 2) as i64;
    while out.len() < 2 * rank + 2 * rank * (rank - 1) + RANDOM_SAMPLES {
        let v: Vec<Rat> = (0..rank)
            .map(|_| linalg::rat((rng.next_u32() % SAMPLE_RANGE) as i64 - half))
            .collect();
        if !linalg::is_zero_vec(&v) {
            out.push(v);
        }
    }
    out
}

/// A point `base + ε d₁ + ε² d₂ + …` with `ε` infinitesimal. Pairing with a
/// character gives a tuple compared lexicographically.
///
/// The first directions are rays of the wall, so that the point is generic
/// inside the wall before it leaves it along the transverse direction (the
/// sum of the generators of the chosen maximal cone). Unit vectors close the
/// sequence, making the pairing injective on `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexPoint {
    pub base: LatticeVector,
    pub directions: Vec<LatticeVector>,
    /// 1-based position of the transverse direction in the pairing tuple.
    pub transverse_position: usize,
}

impl LexPoint {
    pub fn transverse(&self) -> &LatticeVector {
        &self.directions[self.transverse_position - 1]
    }

    pub fn pair(&self, u: &DualCharacter) -> Vec<Rat> {
        core::iter::once(&self.base)
            .chain(&self.directions)
            .map(|v| u.pair(v))
            .collect()
    }

    /// 0-based index of the first tuple entry where the two characters
    /// differ.
    pub fn separation_index(&self, u: &DualCharacter, v: &DualCharacter) -> Option<usize> {
        self.pair(u).into_iter().zip(self.pair(v)).position(|(a, b)| a != b)
    }
}

/// The fan of `P^1`.
pub fn projective_line() -> Fan {
    Fan::new(
        1,
        alloc::vec![LatticeVector::from_i64(&[1]), LatticeVector::from_i64(&[-1])],
        alloc::vec![alloc::vec![0], alloc::vec![1]],
    )
    .expect("P^1 fan")
}

/// The fan of `P^n` with rays `e_1, …, e_n, -(e_1 + … + e_n)`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    rays.push(LatticeVector::new(alloc::vec![Int::from(-1); n]));
    let cones = (0..=n).map(|skip| (0..=n).filter(|&r| r != skip).collect()).collect();
    Fan::new(n, rays, cones).expect("P^n fan")
}

/// The fan of `P^1 × P^1`.
pub fn p1_times_p1() -> Fan {
    let rays = alloc::vec![
        LatticeVector::from_i64(&[1, 0]),
        LatticeVector::from_i64(&[0, 1]),
        LatticeVector::from_i64(&[-1, 0]),
        LatticeVector::from_i64(&[0, -1]),
    ];
    let cones = alloc::vec![
        alloc::vec![0, 1],
        alloc::vec![1, 2],
        alloc::vec![2, 3],
        alloc::vec![3, 0],
    ];
    Fan::new(2, rays, cones).expect("P1xP1 fan")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    #[test]
    fn standard_fans_are_complete() {
        for fan in [
            projective_line(),
            projective_space(2),
            projective_space(3),
            p1_times_p1(),
        ] {
            let report = fan.validate(true);
            assert!(report.is_valid(), "{report:?}");
            assert_eq!(report.complete, Some(true));
            assert!(report.sampled_directions >= 1000);
        }
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let p2 = projective_space(2);
        let fan = Fan::new(2, p2.rays().to_vec(), p2.cones()[..2].to_vec()).unwrap();
        let err = fan.validate(true).into_result().unwrap_err();
        assert_eq!(err.code(), "incomplete_support");
        assert!(fan.validate(false).is_valid());
    }

    #[test]
    fn overlapping_cones_are_not_a_fan() {
        let rays = alloc::vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[1, 1])];
        let fan = Fan::new(2, rays, alloc::vec![alloc::vec![0, 1], alloc::vec![0, 2]]);
        // cone(e1, e1+e2) sits inside cone(e1, e2)
        let fan = fan.unwrap();
        assert_eq!(fan.validate(false).into_result().unwrap_err().code(), "not_a_fan");
    }

    #[test]
    fn crossing_cones_are_not_a_fan() {
        let rays = alloc::vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[2, -1]), lv(&[-1, 2])];
        let fan = Fan::new(2, rays, alloc::vec![alloc::vec![0, 1], alloc::vec![2, 3]]).unwrap();
        assert_eq!(fan.validate(false).into_result().unwrap_err().code(), "not_a_fan");
    }

    /// Pairs of maximal cones sharing exactly `n - 1` rays.
    fn brute_force_adjacency(fan: &Fan) -> usize {
        let n = fan.rank();
        let mut count = 0;
        for i in 0..fan.num_cones() {
            for j in i + 1..fan.num_cones() {
                let shared = fan.cone_rays(i).iter().filter(|r| fan.cone_rays(j).contains(r)).count();
                if shared == n - 1 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn wall_counts() {
        assert_eq!(p1_times_p1().walls().len(), brute_force_adjacency(&p1_times_p1()));
        let p1 = projective_line();
        let w = p1.walls();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].normal, DualCharacter::from_i64(&[1]));
        assert_eq!(projective_space(2).walls().len(), 3);
        assert_eq!(p1_times_p1().walls().len(), 4);
        assert_eq!(projective_space(3).walls().len(), 6);
    }

    #[test]
    fn wall_normals_vanish_on_wall_and_are_positive_on_first_cone() {
        for fan in [projective_space(2), projective_space(3), p1_times_p1()] {
            for w in fan.walls() {
                for &r in &w.rays {
                    assert!(w.normal.pair(fan.ray(r)).is_zero());
                }
                assert!(w.normal.pair(&fan.cone(w.first).interior_point()).is_positive());
                assert!(w.normal.pair(&fan.cone(w.second).interior_point()).is_negative());
            }
        }
    }

    #[test]
    fn star_subdivision_of_p2() {
        let p2 = projective_space(2);
        let sub = p2.star_subdivide(2).unwrap();
        assert_eq!(sub.fan.num_cones(), 4);
        assert_eq!(sub.fan.ray(sub.new_ray), &lv(&[1, 1]));
        assert!(sub.fan.validate(true).is_valid());
        assert_eq!(sub.fan.walls().len(), brute_force_adjacency(&sub.fan));
        assert_eq!(sub.fan.walls().len(), 4);
        assert_eq!(
            projective_line().star_subdivide(0).unwrap_err(),
            Error::NotSmoothCone(0)
        );
    }

    #[test]
    fn lex_point_construction() {
        let p2 = projective_space(2);
        // cone 2 is cone(e1, e2); its wall with cone 1 = cone(e1, -e1-e2) is the ray e1
        let wall = p2.walls().into_iter().find(|w| w.rays == alloc::vec![0]).unwrap();
        let side = if p2.cone_rays(wall.first) == [0, 1] {
            Side::First
        } else {
            Side::Second
        };
        let lp = p2.lex_point(&wall, side);
        assert_eq!(lp.base, lv(&[1, 0]));
        assert_eq!(lp.transverse(), &lv(&[1, 1]));
        let a = DualCharacter::from_i64(&[0, 1]);
        let b = DualCharacter::from_i64(&[0, 2]);
        assert_ne!(lp.pair(&a), lp.pair(&b));
        let z = DualCharacter::from_i64(&[0, 0]);
        // separated at 1-based position 2, the transverse direction
        assert_eq!(lp.separation_index(&a, &z), Some(1));
        assert_eq!(lp.pair(&a)[1], rat(1));
    }
}
