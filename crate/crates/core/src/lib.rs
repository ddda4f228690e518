//! Distance-ratio (`j`) metric on proper subdomains of Euclidean space.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod metric;
pub mod point;
pub mod punctured;
pub mod ballgeom;
pub mod geodesics;
pub mod gallery;
pub mod suite;

pub use domain::{Disk, Domain, NearestBoundarySet};
pub use error::{Error, Result};
pub use metric::{annulus_bounds, exhaustion_radius, in_j_ball, j_distance, AnnulusBounds, JBall, Radius};
pub use point::{Point, Similarity, Vec2};
