//! Lattice points of `N`, characters of `M`, and rational polyhedral cones.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, nullspace, primitive_integer, rank, Int, Rat};
use crate::util::combinations;

/// A point of the lattice `N ≅ Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self(alloc::vec![Int::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Int::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.0.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn gcd(&self) -> Int {
        self.0.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd().is_one()
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: Self) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Divides out the gcd of the coordinates.
pub fn primitive_vector(v: &LatticeVector) -> Result<LatticeVector> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.gcd();
    Ok(LatticeVector(v.0.iter().map(|x| x / &g).collect()))
}

/// A point of `M_Q`. Characters of `M` are the integral ones; rational
/// entries appear in Q-divisor data.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualCharacter(Vec<Rat>);

impl DualCharacter {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&x| linalg::rat(x)).collect())
    }

    pub fn from_ints(coords: &[Int]) -> Self {
        Self(coords.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self(alloc::vec![Rat::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates, if integral.
    pub fn to_ints(&self) -> Option<Vec<Int>> {
        self.is_integral()
            .then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn pair(&self, v: &LatticeVector) -> Rat {
        self.0
            .iter()
            .zip(v.coords())
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn pair_rat(&self, v: &[Rat]) -> Rat {
        dot(&self.0, v)
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Self(self.0.iter().map(|x| x * q).collect())
    }
}

impl fmt::Debug for DualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DualCharacter {
    type Output = DualCharacter;
    fn add(self, rhs: Self) -> DualCharacter {
        DualCharacter(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DualCharacter {
    type Output = DualCharacter;
    fn sub(self, rhs: Self) -> DualCharacter {
        DualCharacter(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DualCharacter {
    type Output = DualCharacter;
    fn neg(self) -> DualCharacter {
        DualCharacter(self.0.iter().map(|a| -a).collect())
    }
}

/// Finds the character `u` with `<u, v_i> = jumps[i]` for every ray.
pub fn solve_character(rays: &[LatticeVector], jumps: &[Int]) -> Result<DualCharacter> {
    let u = solve_rational_character(
        rays,
        &jumps.iter().map(|j| Rat::from_integer(j.clone())).collect::<Vec<_>>(),
    )?;
    if !u.is_integral() {
        return Err(Error::NonIntegral);
    }
    Ok(u)
}

/// As [`solve_character`] but with rational prescribed values and no
/// integrality requirement.
pub fn solve_rational_character(rays: &[LatticeVector], values: &[Rat]) -> Result<DualCharacter> {
    let n = rays.first().map(LatticeVector::rank).ok_or(Error::RaysNotSpanning)?;
    if let Some(r) = rays.iter().find(|r| r.rank() != n) {
        return Err(Error::RankMismatch {
            expected: n,
            found: r.rank(),
        });
    }
    if values.len() != rays.len() {
        return Err(Error::DimensionMismatch {
            expected: rays.len(),
            found: values.len(),
        });
    }
    let rows: Vec<Vec<Rat>> = rays.iter().map(LatticeVector::to_rat).collect();
    if rank(&rows) < n {
        return Err(Error::RaysNotSpanning);
    }
    let x = linalg::solve(&rows, values).ok_or(Error::Inconsistent)?;
    Ok(DualCharacter(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    /// Nonnegative combination of the generators.
    Primal,
    /// Nonnegative on every generator (membership in the dual cone).
    Dual,
    RelativeInterior,
}

/// A rational polyhedral cone given by primitive generators, with its
/// inequality description cached.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    ambient: usize,
    generators: Vec<LatticeVector>,
    dim: usize,
    equations: Vec<Vec<Rat>>,
    facets: Vec<DualCharacter>,
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cone")
            .field("generators", &self.generators)
            .field("dim", &self.dim)
            .finish()
    }
}

impl Cone {
    /// Builds a cone from arbitrary nonzero generators. Generators are made
    /// primitive, deduplicated, and redundant ones are dropped.
    pub fn new(ambient: usize, generators: &[LatticeVector]) -> Result<Self> {
        let mut gens: Vec<LatticeVector> = Vec::new();
        for g in generators {
            if g.rank() != ambient {
                return Err(Error::RankMismatch {
                    expected: ambient,
                    found: g.rank(),
                });
            }
            let p = primitive_vector(g)?;
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<LatticeVector> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let rest = Self::from_generators_unchecked(ambient, others);
            if rest.contains_rat(&gens[i].to_rat()) {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Self::from_generators_unchecked(ambient, gens))
    }

    /// Builds the inequality description without reducing the generators.
    pub(crate) fn from_generators_unchecked(ambient: usize, generators: Vec<LatticeVector>) -> Self {
        let rows: Vec<Vec<Rat>> = generators.iter().map(LatticeVector::to_rat).collect();
        let mut span = rows.clone();
        linalg::rref(&mut span);
        let dim = span.len();
        let equations = nullspace(&rows, ambient);
        let mut facets: Vec<DualCharacter> = Vec::new();
        if dim > 0 {
            for subset in combinations(generators.len(), dim - 1) {
                let chosen: Vec<&Vec<Rat>> = subset.iter().map(|&i| &rows[i]).collect();
                let sys: Vec<Vec<Rat>> = chosen
                    .iter()
                    .map(|s| span.iter().map(|b| dot(b, s)).collect())
                    .collect();
                let sol = if sys.is_empty() {
                    let mut e = alloc::vec![Rat::zero(); dim];
                    e[0] = Rat::one();
                    alloc::vec![e]
                } else {
                    if rank(&sys) != dim - 1 {
                        continue;
                    }
                    nullspace(&sys, dim)
                };
                if sol.len() != 1 {
                    continue;
                }
                let mut a = alloc::vec![Rat::zero(); ambient];
                for (c, b) in sol[0].iter().zip(&span) {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += c * y;
                    }
                }
                let signs: Vec<Rat> = rows.iter().map(|g| dot(&a, g)).collect();
                let all_nonneg = signs.iter().all(|s| !s.is_negative());
                let all_nonpos = signs.iter().all(|s| !s.is_positive());
                let normal = if all_nonneg {
                    a
                } else if all_nonpos {
                    a.iter().map(|x| -x).collect()
                } else {
                    continue;
                };
                let Some(p) = primitive_integer(&normal) else {
                    continue;
                };
                let f = DualCharacter::from_ints(&p);
                if !facets.contains(&f) {
                    facets.push(f);
                }
            }
        }
        facets.sort();
        Self {
            ambient,
            generators,
            dim,
            equations,
            facets,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    /// Inward facet normals: the cone is `{x in span : <a, x> >= 0}`.
    pub fn facet_normals(&self) -> &[DualCharacter] {
        &self.facets
    }

    /// Linear equations cutting out the span of the cone.
    pub fn equations(&self) -> &[Vec<Rat>] {
        &self.equations
    }

    /// A point in the relative interior: the sum of the generators.
    pub fn interior_point(&self) -> LatticeVector {
        self.generators
            .iter()
            .fold(LatticeVector::zero(self.ambient), |acc, g| &acc + g)
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|a| !a.pair_rat(x).is_negative())
    }

    pub fn relint_contains_rat(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|a| a.pair_rat(x).is_positive())
    }

    pub fn dual_contains(&self, u: &DualCharacter) -> bool {
        self.generators.iter().all(|g| !u.pair(g).is_negative())
    }

    /// Smooth: the generators form part of a basis of `N`.
    pub fn is_smooth(&self) -> bool {
        if self.generators.len() != self.dim {
            return false;
        }
        // gcd of maximal minors equals one
        let rows: Vec<Vec<Rat>> = self.generators.iter().map(LatticeVector::to_rat).collect();
        let k = rows.len();
        let mut g = Int::zero();
        for cols in combinations(self.ambient, k) {
            let minor: Vec<Vec<Rat>> = rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            g = g.gcd(&linalg::determinant(&minor).to_integer());
        }
        g.is_one() || k == 0
    }
}

/// Membership test in one of three senses; `x` is a point of `N_Q` for the
/// primal and relative-interior modes and a functional for the dual mode.
pub fn cone_contains(c: &Cone, x: &[Rat], mode: Containment) -> Result<bool> {
    if x.len() != c.ambient {
        return Err(Error::RankMismatch {
            expected: c.ambient,
            found: x.len(),
        });
    }
    Ok(match mode {
        Containment::Primal => c.contains_rat(x),
        Containment::RelativeInterior => c.relint_contains_rat(x),
        Containment::Dual => c.dual_contains(&DualCharacter::new(x.to_vec())),
    })
}
