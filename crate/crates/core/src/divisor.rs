//! T-Cartier divisors given by one character per maximal cone.
//!
//! Sign convention: the divisor with characters `u_σ` has section polytope
//! `P = {u : <u, v_ρ> <= <u_σ, v_ρ> for ρ ⊂ σ}`, which equals `conv{u_σ}`
//! when the divisor is nef. On `P^1`, `u = (0 | -1)` is `O(1)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::geometry::{solve_rational_character, DualCharacter};
use crate::linalg::Rat;
use crate::polytope::{lattice_points_of_inequalities, LatticePolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFailure {
    pub first: usize,
    pub second: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct TCartierDivisor {
    fan: Arc<Fan>,
    u: Vec<DualCharacter>,
    rational: bool,
}

impl PartialEq for TCartierDivisor {
    fn eq(&self, other: &Self) -> bool {
        same_fan(&self.fan, &other.fan) && self.u == other.u
    }
}

impl Eq for TCartierDivisor {}

pub(crate) fn same_fan(a: &Arc<Fan>, b: &Arc<Fan>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Checks wall compatibility of local characters, one failure per wall.
pub fn validate_divisor(fan: &Fan, u: &[DualCharacter]) -> Vec<WallFailure> {
    let mut out = Vec::new();
    if u.len() != fan.num_cones() {
        out.push(WallFailure {
            first: 0,
            second: 0,
            reason: format!("expected {} characters, found {}", fan.num_cones(), u.len()),
        });
        return out;
    }
    for w in fan.walls() {
        let diff = &u[w.first] - &u[w.second];
        if let Some(&r) = w.rays.iter().find(|&&r| !diff.pair(fan.ray(r)).is_zero()) {
            out.push(WallFailure {
                first: w.first,
                second: w.second,
                reason: format!("u_{} - u_{} does not vanish on ray {r}", w.first, w.second),
            });
        }
    }
    out
}

impl TCartierDivisor {
    pub fn new(fan: Arc<Fan>, u: Vec<DualCharacter>) -> Result<Self> {
        if let Some(bad) = u.iter().find(|c| c.rank() != fan.rank()) {
            return Err(Error::RankMismatch {
                expected: fan.rank(),
                found: bad.rank(),
            });
        }
        if let Some(f) = validate_divisor(&fan, &u).into_iter().next() {
            return Err(Error::IncompatibleLocalData(format!(
                "cones {} and {}: {}",
                f.first, f.second, f.reason
            )));
        }
        let rational = u.iter().any(|c| !c.is_integral());
        Ok(Self { fan, u, rational })
    }

    pub fn trivial(fan: Arc<Fan>) -> Self {
        let u = (0..fan.num_cones()).map(|_| DualCharacter::zero(fan.rank())).collect();
        Self {
            fan,
            u,
            rational: false,
        }
    }

    /// The divisor whose jump on ray `ρ` is `values[ρ]`, i.e. `Σ -values[ρ] D_ρ`
    /// in the P-convention. Needs simplicial cones to be solvable.
    pub fn from_ray_values(fan: Arc<Fan>, values: &[Rat]) -> Result<Self> {
        if values.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch {
                expected: fan.rays().len(),
                found: values.len(),
            });
        }
        let mut u = Vec::with_capacity(fan.num_cones());
        for c in 0..fan.num_cones() {
            let rays: Vec<_> = fan.cone_rays(c).iter().map(|&r| fan.ray(r).clone()).collect();
            let vals: Vec<Rat> = fan.cone_rays(c).iter().map(|&r| values[r].clone()).collect();
            u.push(
                solve_rational_character(&rays, &vals)
                    .map_err(|_| Error::IncompatibleLocalData(format!("ray values are not linear on cone {c}")))?,
            );
        }
        Self::new(fan, u)
    }

    /// `O(d)` on `P^n` built on `fan`, with jump `d` on the last ray.
    pub fn hyperplane_multiple(fan: Arc<Fan>, d: i64) -> Result<Self> {
        let mut values = alloc::vec![Rat::zero(); fan.rays().len()];
        *values.last_mut().ok_or(Error::EmptyInput)? = crate::linalg::rat(d);
        Self::from_ray_values(fan, &values)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn characters(&self) -> &[DualCharacter] {
        &self.u
    }

    pub fn character(&self, cone: usize) -> &DualCharacter {
        &self.u[cone]
    }

    pub fn is_rational(&self) -> bool {
        self.rational
    }

    /// The `m` with `u_first - u_second = m · n_τ`.
    pub fn wall_degree(&self, wall: &Wall) -> Rat {
        let diff = &self.u[wall.first] - &self.u[wall.second];
        degree_along(&diff, &wall.normal)
    }

    pub fn wall_degrees(&self) -> Vec<(Wall, Rat)> {
        self.fan
            .walls()
            .into_iter()
            .map(|w| {
                let d = self.wall_degree(&w);
                (w, d)
            })
            .collect()
    }

    pub fn is_nef(&self) -> bool {
        self.wall_degrees().iter().all(|(_, d)| !d.is_negative())
    }

    pub fn is_ample(&self) -> bool {
        self.wall_degrees().iter().all(|(_, d)| d.is_positive())
    }

    /// `<u_σ, v_ρ>` for any maximal cone σ containing ρ.
    pub fn ray_values(&self) -> Vec<Rat> {
        (0..self.fan.rays().len())
            .map(|r| {
                let c = (0..self.fan.num_cones())
                    .find(|&c| self.fan.cone_rays(c).contains(&r))
                    .expect("every ray lies in a maximal cone");
                self.u[c].pair(self.fan.ray(r))
            })
            .collect()
    }

    pub fn section_inequalities(&self) -> Vec<(Vec<Rat>, Rat)> {
        self.fan
            .rays()
            .iter()
            .zip(self.ray_values())
            .map(|(v, b)| (v.to_rat(), b))
            .collect()
    }

    pub fn section_data(&self) -> Result<SectionData> {
        if self.rational {
            return Err(Error::NonIntegral);
        }
        let points = lattice_points_of_inequalities(self.fan.rank(), &self.section_inequalities())?;
        let polytope = if self.is_nef() {
            Some(LatticePolytope::hull(&self.u)?)
        } else {
            None
        };
        Ok(SectionData {
            h0: points.len(),
            lattice_points: points,
            polytope,
        })
    }

    pub fn h0(&self) -> Result<usize> {
        Ok(self.section_data()?.h0)
    }

    fn check_fan(&self, other: &Self) -> Result<()> {
        if !same_fan(&self.fan, &other.fan) {
            return Err(Error::InvalidInput("divisors live on different fans".into()));
        }
        Ok(())
    }

    pub fn scale(&self, q: &Rat) -> Self {
        let u: Vec<DualCharacter> = self.u.iter().map(|c| c.scale(q)).collect();
        let rational = u.iter().any(|c| !c.is_integral());
        Self {
            fan: self.fan.clone(),
            u,
            rational,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_fan(other)?;
        let u: Vec<DualCharacter> = self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect();
        let rational = u.iter().any(|c| !c.is_integral());
        Ok(Self {
            fan: self.fan.clone(),
            u,
            rational,
        })
    }

    pub fn negate(&self) -> Self {
        Self {
            fan: self.fan.clone(),
            u: self.u.iter().map(|c| -c).collect(),
            rational: self.rational,
        }
    }
}

/// The `m` with `diff = m · normal`; assumes `diff` is a multiple.
pub(crate) fn degree_along(diff: &DualCharacter, normal: &DualCharacter) -> Rat {
    let (i, n) = normal
        .coords()
        .iter()
        .enumerate()
        .find(|(_, x)| !x.is_zero())
        .expect("wall normal is nonzero");
    &diff.coords()[i] / n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionData {
    /// `conv{u_σ}`, present when the divisor is nef.
    pub polytope: Option<LatticePolytope>,
    pub lattice_points: Vec<DualCharacter>,
    pub h0: usize,
}

/// The normal fan of `p` with `u_σ` the vertex of cone σ. Ample by
/// construction.
pub fn divisor_from_polytope(p: &LatticePolytope) -> Result<(Arc<Fan>, TCartierDivisor)> {
    let (fan, vertices) = p.normal_fan()?;
    let fan = Arc::new(fan);
    let d = TCartierDivisor::new(fan.clone(), vertices)?;
    Ok((fan, d))
}

/// The divisor on `fan` whose characters are the vertices of `p` maximising
/// each cone's interior point. The fan must refine the normal fan of `p`.
pub fn divisor_on_fan(fan: Arc<Fan>, p: &LatticePolytope) -> Result<TCartierDivisor> {
    if p.rank() != fan.rank() {
        return Err(Error::RankMismatch {
            expected: fan.rank(),
            found: p.rank(),
        });
    }
    let mut u = Vec::with_capacity(fan.num_cones());
    for c in 0..fan.num_cones() {
        let w = fan.cone(c).interior_point();
        let best = p.vertices().iter().map(|v| v.pair(&w)).max().ok_or(Error::EmptyInput)?;
        let argmax: Vec<&DualCharacter> = p.vertices().iter().filter(|v| v.pair(&w) == best).collect();
        if argmax.len() != 1 {
            return Err(Error::NotARefinement(format!(
                "cone {c} does not select a vertex of the polytope"
            )));
        }
        u.push(argmax[0].clone());
    }
    TCartierDivisor::new(fan, u)
}
