#![no_std]

extern crate alloc;

pub mod divisor;
pub mod error;
pub mod fan;
pub mod geometry;
pub mod klyachko;
pub mod linalg;
pub mod mlbundle;
pub mod polytope;
pub mod positivity;
pub mod sections;
mod util;

pub use error::{Error, Result};
pub use fan::{Fan, LexPoint, Side, ValidationReport, Wall};
pub use geometry::{Cone, Containment, DualCharacter, LatticeVector};
pub use linalg::{Int, Rat, RationalSubspace};
