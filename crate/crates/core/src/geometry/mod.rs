//! Points, convex polygons and the affine distance functions built on them.

mod affine;
mod point;
mod polygon;
mod random;

pub use affine::{signed_distance_line, AffineScalar};
pub use point::{Point2, Vector2};
pub use random::random_convex_polygon;
pub use polygon::{
    validate_loop, LambdaPairChoice, Polygon, PolygonDefect, RegularityReport, CONVEXITY_TOL,
};
