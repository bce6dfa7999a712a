//! Flexibility of complete bipartite bar-joint frameworks in the Euclidean,
//! hyperbolic and spherical planes.
//!
//! * [`geometry`]: metrics, model conversions, geodesics and circles.
//! * [`framework`]: the two-part joint model, rod lengths, overlaps, antipodal flips.
//! * [`classifier`]: decides flexibility and the mechanism kind.
//! * [`polysym`]: exact construction and verification of the defining polynomials.
//! * [`kinematics`]: rigidity matrices, flex tracing and mechanism generators.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod classifier;
pub mod error;
pub mod exec;
pub mod framework;
pub mod geometry;
pub mod kinematics;
pub mod polysym;

pub use error::FlexError;
pub use exec::Exec;
pub use geometry::{GeometryKind, Point};

/// Default tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;
