//! Lattice polytopes in `M_R`: hulls, lattice points, Minkowski sums,
//! dilations, Cayley sums and normal fans.
//!
//! Facets are found by brute force over affinely independent subsets of
//! points. That is plenty for the sizes handled here (dimension at most five,
//! a few dozen points).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::geometry::{DualCharacter, LatticeVector};
use crate::linalg::{self, ceil, dot, floor, nullspace, primitive_integer, rank, Int, Rat};
use crate::util::combinations;

/// An inequality `<u, normal> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub offset: Int,
}

/// A lattice polytope with canonical vertex list and cached inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    rank: usize,
    dim: usize,
    vertices: Vec<DualCharacter>,
    facets: Vec<Halfspace>,
    /// Equations `<u, normal> = offset` cutting out the affine hull.
    equations: Vec<Halfspace>,
}

impl LatticePolytope {
    /// Convex hull of a nonempty set of lattice points.
    pub fn hull(points: &[DualCharacter]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.rank();
        let mut pts: Vec<DualCharacter> = Vec::with_capacity(points.len());
        for p in points {
            if p.rank() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: p.rank(),
                });
            }
            if !p.is_integral() {
                return Err(Error::InvalidInput(format!("{p:?} is not a lattice point")));
            }
            if !pts.contains(p) {
                pts.push(p.clone());
            }
        }
        pts.sort();
        let p0 = pts[0].clone();
        let diffs: Vec<Vec<Rat>> = pts.iter().map(|p| (p - &p0).coords().to_vec()).collect();
        let mut echelon = diffs.clone();
        let pivots = linalg::rref(&mut echelon);
        let dim = pivots.len();
        let equations: Vec<Halfspace> = nullspace(&diffs, n)
            .iter()
            .filter_map(|a| primitive_integer(a))
            .map(|a| {
                let normal = LatticeVector::new(a);
                let offset = p0.pair(&normal).to_integer();
                Halfspace { normal, offset }
            })
            .collect();
        if dim == 0 {
            return Ok(Self {
                rank: n,
                dim,
                vertices: vec![p0],
                facets: Vec::new(),
                equations,
            });
        }
        let projected: Vec<Vec<Rat>> = pts
            .iter()
            .map(|p| pivots.iter().map(|&c| p.coords()[c].clone()).collect())
            .collect();
        let mut local: Vec<(Vec<Int>, Int)> = Vec::new();
        for subset in combinations(projected.len(), dim) {
            let sys: Vec<Vec<Rat>> = subset
                .iter()
                .map(|&i| {
                    let mut row = projected[i].clone();
                    row.push(-Rat::one());
                    row
                })
                .collect();
            if rank(&sys) != dim {
                continue;
            }
            let ns = nullspace(&sys, dim + 1);
            if ns.len() != 1 {
                continue;
            }
            let a: Vec<Rat> = ns[0][..dim].to_vec();
            let Some(a) = primitive_integer(&a) else {
                continue;
            };
            let a_rat: Vec<Rat> = a.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let b = dot(&a_rat, &projected[subset[0]]);
            let values: Vec<Rat> = projected.iter().map(|q| dot(&a_rat, q) - &b).collect();
            let oriented = if values.iter().all(|v| !v.is_positive()) {
                (a, b.to_integer())
            } else if values.iter().all(|v| !v.is_negative()) {
                (a.iter().map(|x| -x).collect(), -b.to_integer())
            } else {
                continue;
            };
            if !local.contains(&oriented) {
                local.push(oriented);
            }
        }
        let facets: Vec<Halfspace> = {
            let mut f: Vec<Halfspace> = local
                .iter()
                .map(|(a, b)| {
                    let mut normal = vec![Int::zero(); n];
                    for (x, &c) in a.iter().zip(&pivots) {
                        normal[c] = x.clone();
                    }
                    Halfspace {
                        normal: LatticeVector::new(normal),
                        offset: b.clone(),
                    }
                })
                .collect();
            f.sort();
            f
        };
        let vertices: Vec<DualCharacter> = pts
            .iter()
            .zip(&projected)
            .filter(|(_, q)| {
                let tight: Vec<Vec<Rat>> = local
                    .iter()
                    .filter(|(a, b)| {
                        let a_rat: Vec<Rat> = a.iter().map(|x| Rat::from_integer(x.clone())).collect();
                        dot(&a_rat, q) == Rat::from_integer(b.clone())
                    })
                    .map(|(a, _)| a.iter().map(|x| Rat::from_integer(x.clone())).collect())
                    .collect();
                rank(&tight) == dim
            })
            .map(|(p, _)| p.clone())
            .collect();
        Ok(Self {
            rank: n,
            dim,
            vertices,
            facets,
            equations,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    pub fn vertices(&self) -> &[DualCharacter] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    pub fn contains(&self, u: &DualCharacter) -> bool {
        u.rank() == self.rank
            && self
                .equations
                .iter()
                .all(|h| u.pair(&h.normal) == Rat::from_integer(h.offset.clone()))
            && self
                .facets
                .iter()
                .all(|h| u.pair(&h.normal) <= Rat::from_integer(h.offset.clone()))
    }

    /// All lattice points, sorted.
    pub fn lattice_points(&self) -> Vec<DualCharacter> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for_each_box_point(&lo, &hi, |p| {
            let u = DualCharacter::from_ints(p);
            if self.contains(&u) {
                out.push(u);
            }
        });
        out
    }

    pub fn num_lattice_points(&self) -> usize {
        self.lattice_points().len()
    }

    fn bounding_box(&self) -> (Vec<Int>, Vec<Int>) {
        let lo = (0..self.rank)
            .map(|i| self.vertices.iter().map(|v| v.coords()[i].to_integer()).min().unwrap())
            .collect();
        let hi = (0..self.rank)
            .map(|i| self.vertices.iter().map(|v| v.coords()[i].to_integer()).max().unwrap())
            .collect();
        (lo, hi)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let sums: Vec<DualCharacter> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a + b))
            .collect();
        Self::hull(&sums)
    }

    pub fn dilate(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        let k = linalg::rat(i64::from(m));
        let pts: Vec<DualCharacter> = self.vertices.iter().map(|v| v.scale(&k)).collect();
        Self::hull(&pts)
    }

    /// The polytope `w - self`.
    pub fn reflect_translate(&self, w: &DualCharacter) -> Result<Self> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: w.rank(),
            });
        }
        let pts: Vec<DualCharacter> = self.vertices.iter().map(|v| w - v).collect();
        Self::hull(&pts)
    }

    pub fn translate(&self, w: &DualCharacter) -> Result<Self> {
        let pts: Vec<DualCharacter> = self.vertices.iter().map(|v| v + w).collect();
        Self::hull(&pts)
    }

    /// `conv(self × {0} ∪ other × {1})`.
    pub fn cayley_sum(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let lift = |v: &DualCharacter, h: i64| {
            let mut c = v.coords().to_vec();
            c.push(linalg::rat(h));
            DualCharacter::new(c)
        };
        let pts: Vec<DualCharacter> = self
            .vertices
            .iter()
            .map(|v| lift(v, 0))
            .chain(other.vertices.iter().map(|v| lift(v, 1)))
            .collect();
        Self::hull(&pts)
    }

    /// Normal fan: one maximal cone per vertex, spanned by the outer normals
    /// of the facets through it. Cone `i` belongs to vertex `i`, which
    /// maximises `<·, w>` over the polytope for `w` in the cone.
    pub fn normal_fan(&self) -> Result<(Fan, Vec<DualCharacter>)> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let rays: Vec<LatticeVector> = self.facets.iter().map(|h| h.normal.clone()).collect();
        let cones: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| {
                self.facets
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| v.pair(&h.normal) == Rat::from_integer(h.offset.clone()))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let fan = Fan::new(self.rank, rays, cones)?;
        Ok((fan, self.vertices.clone()))
    }
}

/// Calls `f` on every integer point of the box `[lo, hi]`.
pub fn for_each_box_point(lo: &[Int], hi: &[Int], mut f: impl FnMut(&[Int])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut p: Vec<Int> = lo.to_vec();
    loop {
        f(&p);
        let mut i = 0;
        loop {
            if i == p.len() {
                return;
            }
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i].clone();
            i += 1;
        }
    }
}

/// Lattice points of the bounded polyhedron `{u : <u, a_i> <= b_i}`.
/// Returns an error if the polyhedron is unbounded.
pub fn lattice_points_of_inequalities(rank: usize, inequalities: &[(Vec<Rat>, Rat)]) -> Result<Vec<DualCharacter>> {
    let rows: Vec<Vec<Rat>> = inequalities.iter().map(|(a, _)| a.clone()).collect();
    if rank == 0 {
        return Ok(vec![DualCharacter::zero(0)]);
    }
    let feasible = |x: &[Rat]| inequalities.iter().all(|(a, b)| dot(a, x) <= *b);
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for subset in combinations(rows.len(), rank) {
        let sys: Vec<Vec<Rat>> = subset.iter().map(|&i| rows[i].clone()).collect();
        if rank_of(&sys) != rank {
            continue;
        }
        let rhs: Vec<Rat> = subset.iter().map(|&i| inequalities[i].1.clone()).collect();
        if let Some(x) = linalg::solve(&sys, &rhs) {
            if feasible(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    }
    if vertices.is_empty() {
        // empty, or unbounded without vertices
        if rank_of(&rows) < rank {
            return Err(Error::InvalidInput("inequalities do not bound a polytope".into()));
        }
        return Ok(Vec::new());
    }
    // recession cone must be trivial
    for d in [1i64, -1] {
        for i in 0..rank {
            let mut e = vec![Rat::zero(); rank];
            e[i] = linalg::rat(d);
            if rows.iter().all(|a| !dot(a, &e).is_positive()) {
                return Err(Error::InvalidInput("inequalities do not bound a polytope".into()));
            }
        }
    }
    let lo: Vec<Int> = (0..rank)
        .map(|i| vertices.iter().map(|v| ceil(&v[i])).min().unwrap())
        .collect();
    let hi: Vec<Int> = (0..rank)
        .map(|i| vertices.iter().map(|v| floor(&v[i])).max().unwrap())
        .collect();
    let mut out = Vec::new();
    for_each_box_point(&lo, &hi, |p| {
        let x: Vec<Rat> = p.iter().map(|v| Rat::from_integer(v.clone())).collect();
        if feasible(&x) {
            out.push(DualCharacter::new(x));
        }
    });
    Ok(out)
}

fn rank_of(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        rank(rows)
    }
}
