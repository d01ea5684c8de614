//! Global sections of toric vector bundles, weight by weight.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::divisor::TCartierDivisor;
use crate::error::{Error, Result};
use crate::geometry::DualCharacter;
use crate::klyachko::ToricVectorBundle;
use crate::linalg::{is_zero_vec, Rat, RationalSubspace};
use crate::polytope::lattice_points_of_inequalities;
use crate::positivity::{blowup_pullback, positivity_report};

/// `Γ(X, E)_u`, evaluated at the identity: `⋂_ρ E^ρ(<u, v_ρ>)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub character: DualCharacter,
    pub space: RationalSubspace,
}

pub fn isotypical_sections(b: &ToricVectorBundle, u: &DualCharacter) -> SectionSpace {
    let fan = b.fan();
    let spaces: Vec<RationalSubspace> = (0..fan.rays().len())
        .map(|r| b.filtration(r).at_rat(&u.pair(fan.ray(r))))
        .collect();
    SectionSpace {
        character: u.clone(),
        space: RationalSubspace::meet_all(b.rank(), &spaces).expect("filtrations share the ambient space"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0 {
    pub total: usize,
    /// Characters with a nonzero section space and its dimension, sorted.
    pub support: Vec<(DualCharacter, usize)>,
}

pub fn h0(b: &ToricVectorBundle) -> Result<H0> {
    let fan = b.fan();
    let bounds: Vec<(Vec<Rat>, Rat)> = fan
        .rays()
        .iter()
        .enumerate()
        .map(|(r, v)| (v.to_rat(), Rat::from_integer(b.filtration(r).max_jump())))
        .collect();
    let mut support = Vec::new();
    let mut total = 0;
    for u in lattice_points_of_inequalities(fan.rank(), &bounds)? {
        let d = isotypical_sections(b, &u).space.dim();
        if d > 0 {
            total += d;
            support.push((u, d));
        }
    }
    Ok(H0 { total, support })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub character: DualCharacter,
    pub vector: Vec<Rat>,
}

/// A global section not vanishing at the fixed point of `cone`. The
/// bundle must be nef.
pub fn nonvanishing_section_at(b: &ToricVectorBundle, cone: usize) -> Result<Section> {
    if cone >= b.fan().num_cones() {
        return Err(Error::InvalidInput(format!("no maximal cone {cone}")));
    }
    if !positivity_report(b)?.nef {
        return Err(Error::NotNef);
    }
    search_nonvanishing(b, cone)
}

fn search_nonvanishing(b: &ToricVectorBundle, cone: usize) -> Result<Section> {
    for part in &b.decomposition(cone).parts {
        let sections = isotypical_sections(b, &part.character);
        for s in sections.space.basis() {
            if !is_zero_vec(&b.fiber_evaluation(cone, &part.character, s)?) {
                return Ok(Section {
                    character: part.character.clone(),
                    vector: s.clone(),
                });
            }
        }
    }
    Err(Error::TheoremViolation(format!(
        "nef bundle has no section nonvanishing at the fixed point of cone {cone}"
    )))
}

/// A section vanishing at the fixed point `x` and not at `y`, found on the
/// blowup at `x` twisted by `O(-F)`.
pub fn separating_section(b: &ToricVectorBundle, x: usize, y: usize) -> Result<Section> {
    let fan = b.fan();
    if x == y || x >= fan.num_cones() || y >= fan.num_cones() {
        return Err(Error::InvalidInput("need two distinct fixed points".into()));
    }
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    if !positivity_report(b)?.ample {
        return Err(Error::NotAmple);
    }
    let twisted = if fan.rank() == 1 {
        // on a curve the blowup at a point changes nothing and F is the point
        let mut values = vec![Rat::zero(); fan.rays().len()];
        values[fan.cone_rays(x)[0]] = -Rat::one();
        b.twist(&TCartierDivisor::from_ray_values(fan.clone(), &values)?)?
    } else {
        blowup_pullback(b, x, 1)?.bundle
    };
    // the cone of y keeps its index in the star subdivision of x
    let s = nonvanishing_section_at(&twisted, y)?;
    let at_x = b.fiber_evaluation(x, &s.character, &s.vector)?;
    let at_y = b.fiber_evaluation(y, &s.character, &s.vector)?;
    if !is_zero_vec(&at_x) || is_zero_vec(&at_y) {
        return Err(Error::TheoremViolation(
            "blowup section does not separate the points".into(),
        ));
    }
    Ok(s)
}
