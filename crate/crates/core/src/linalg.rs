//! Exact linear algebra over the rationals.
//!
//! Matrices are plain row lists of [`Rat`]; subspaces are kept in reduced
//! row echelon form so that equality of subspaces is equality of bases.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_integer(v: &[Rat]) -> Option<Vec<Int>> {
    if is_zero_vec(v) {
        return None;
    }
    let lcm = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Brings `rows` into reduced row echelon form in place, drops zero rows and
/// returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows * x = 0}` in `Q^ncols`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Solves `rows * x = rhs`. Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Determinant of a square matrix by elimination.
pub fn determinant(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

/// Applies the matrix `g` (given by rows) to the column vector `v`.
pub fn mat_vec(g: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    g.iter().map(|row| dot(row, v)).collect()
}

/// A linear subspace of `Q^r` in canonical reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl fmt::Debug for RationalSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span[")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "] in Q^{}", self.ambient)
    }
}

impl RationalSubspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        let mut basis = vectors.to_vec();
        rref(&mut basis);
        Ok(Self { ambient, basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut e = vec![Rat::zero(); ambient];
                e[i] = Rat::one();
                e
            })
            .collect();
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    /// The annihilator `{x : <x, b> = 0 for all b in self}` under the
    /// standard pairing.
    pub fn annihilator(&self) -> Self {
        let mut basis = nullspace(&self.basis, self.ambient);
        rref(&mut basis);
        Self {
            ambient: self.ambient,
            basis,
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        rref(&mut rows);
        Ok(Self {
            ambient: self.ambient,
            basis: rows,
        })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let mut eqs = self.annihilator().basis;
        eqs.extend(other.annihilator().basis);
        let mut basis = nullspace(&eqs, self.ambient);
        rref(&mut basis);
        Ok(Self {
            ambient: self.ambient,
            basis,
        })
    }

    pub fn meet_all<'a>(ambient: usize, spaces: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        spaces.into_iter().try_fold(Self::full(ambient), |acc, s| acc.meet(s))
    }

    pub fn sum_all<'a>(ambient: usize, spaces: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        spaces.into_iter().try_fold(Self::zero(ambient), |acc, s| acc.sum(s))
    }

    /// Vectors from this subspace's basis that extend a basis of `base`
    /// to a basis of `base + self`.
    pub fn complement_over(&self, base: &Self) -> Vec<Vec<Rat>> {
        let mut acc = base.basis.clone();
        let mut r = rank(&acc);
        let mut out = Vec::new();
        for v in &self.basis {
            acc.push(v.clone());
            let nr = rank(&acc);
            if nr > r {
                out.push(v.clone());
                r = nr;
            } else {
                acc.pop();
            }
        }
        out
    }

    /// Image under the linear map with matrix `g` (rows), `g` square.
    pub fn image(&self, g: &[Vec<Rat>]) -> Self {
        let vectors: Vec<Vec<Rat>> = self.basis.iter().map(|v| mat_vec(g, v)).collect();
        let mut basis = vectors;
        rref(&mut basis);
        Self {
            ambient: self.ambient,
            basis,
        }
    }

    /// `self ⊕ other` inside `Q^(r1 + r2)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let ambient = self.ambient + other.ambient;
        let mut basis: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(ambient, Rat::zero());
                w
            })
            .collect();
        basis.extend(other.basis.iter().map(|v| {
            let mut w = vec![Rat::zero(); self.ambient];
            w.extend(v.iter().cloned());
            w
        }));
        rref(&mut basis);
        Self { ambient, basis }
    }
}

/// Rounds a rational up to the nearest integer.
pub fn ceil(x: &Rat) -> Int {
    x.ceil().to_integer()
}

pub fn floor(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn abs_int(x: &Int) -> Int {
    x.abs()
}
