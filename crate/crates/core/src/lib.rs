//! Combinatorial curve-and-twist calculus on closed orientable surfaces of
//! genus up to 4, aimed at genus-3 Heegaard diagrams of connected sums of two
//! lens spaces: normal curves, Dehn twists, eyeglass twists, reducing-sphere
//! bookkeeping and factorization of Goeritz elements.

pub mod arr;
pub mod complex;
pub mod drawing;
pub mod eyeglass;
pub mod fmt;
pub mod geom;
pub mod goeritz;
pub mod heegaard;
pub mod homology;
pub mod mapclass;
pub mod path;
pub mod reduce;
pub mod ribbon;
pub mod tri;
pub mod twist;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("inessential curve: {0}")]
    Inessential(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub use drawing::{Drawing, NormalCurve};
pub use tri::{build_genus_surface, Triangulation};
