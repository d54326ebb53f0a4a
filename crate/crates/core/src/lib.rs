//! Direct serendipity and direct mixed finite elements on convex polygons.

pub mod assembly;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod mixed;
pub mod quadrature;
pub mod serendipity;
mod scalar;

pub use error::{FemError, Result};
pub use geometry::{Point2, Polygon, Vector2};
pub use scalar::Real;

pub type Polygon64 = Polygon<f64>;
pub type Polygon32 = Polygon<f32>;

pub type DsElement64 = serendipity::DsElement<f64>;
pub type DsElement32 = serendipity::DsElement<f32>;
pub type MixedElement64 = mixed::MixedElement<f64>;
pub type MixedElement32 = mixed::MixedElement<f32>;
pub type Mesh64 = mesh::Mesh<f64>;
pub type Mesh32 = mesh::Mesh<f32>;
