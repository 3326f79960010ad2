//! Balanced convex islands in red/blue point sets.
//!
//! Given `r` red and `b` blue points in general position, an *island* is a
//! subset whose convex hull contains no other input point. This crate finds
//! islands with prescribed color counts using exact arithmetic throughout:
//!
//! - [`wedge`]: depth-first search over the cells of the arrangement of all
//!   lines through two points, maintaining circular windows around an apex.
//! - [`strip`]: rotating sweep over all slope events, maintaining linear
//!   windows of the projection order.
//! - [`island_path`]: one-swap paths between islands of equal size.
//! - [`ceder`] and [`balanced`]: six-partition points, wedge fans, the fast
//!   algorithm and the top-level orchestrator.
//! - [`oracle`]: brute-force enumeration used to certify every result.

pub mod arrangement;
pub mod balanced;
pub mod ceder;
pub mod generate;
pub mod geom;
pub mod island_path;
pub mod oracle;
pub mod pointfile;
pub mod points;
pub mod record;
pub mod render;
pub mod scalar;
pub mod strip;
pub mod wedge;

pub use balanced::{balanced_island, Algorithm, Case, Certificate, Solution};
pub use geom::{Point, Rational, RationalPoint};
pub use oracle::{is_island, Island, TargetCounts};
pub use points::{Color, ColoredPoint, ColoredPointSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("points {0}, {1} and {2} are collinear")]
    CollinearTriple(usize, usize, usize),
    #[error("convex hull is empty")]
    EmptyHull,
    #[error("alpha {0} outside [0, 1/2]")]
    AlphaOutOfRange(String),
    #[error("apex coincides with point {0}")]
    ApexAtPoint(usize),
    #[error("apex lies on the line through points {0} and {1}")]
    ApexOnLine(usize, usize),
    #[error("unknown point id {0}")]
    UnknownId(usize),
    #[error("{n} points exceed the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("target ({r_target}, {b_target}) exceeds available counts ({r}, {b})")]
    TargetOutOfRange {
        r_target: usize,
        b_target: usize,
        r: usize,
        b: usize,
    },
    #[error("window size {k} outside 1..={n}")]
    WindowSize { k: usize, n: usize },
    #[error("point set too small: {0}")]
    TooFewPoints(usize),
    #[error("set {0:?} is not an island")]
    NotAnIsland(Vec<usize>),
    #[error("islands have different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("points {0} and {1} are not adjacent when their line is crossed")]
    NonAdjacentSwap(usize, usize),
    #[error("fast precondition fails: k = {k} is not below {bound}")]
    PreconditionFailed { k: usize, bound: String },
    #[error("internal assertion: {0}")]
    InternalAssertion(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("no six-partition point found")]
    CederNotFound,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
