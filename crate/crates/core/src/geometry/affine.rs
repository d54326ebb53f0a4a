use crate::error::{FemError, Result};
use crate::geometry::{Point2, Vector2};
use crate::Real;

/// An affine function `x -> grad . x + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineScalar<T> {
    pub grad: Vector2<T>,
    pub offset: T,
}

impl<T: Real> AffineScalar<T> {
    pub fn new(grad: Vector2<T>, offset: T) -> Self {
        AffineScalar { grad, offset }
    }

    pub fn constant(c: T) -> Self {
        AffineScalar::new(Vector2::zero(), c)
    }

    /// The coordinate function `x` (`axis == 0`) or `y` (`axis == 1`).
    pub fn coordinate(axis: usize) -> Self {
        let g = if axis == 0 {
            Vector2::new(T::one(), T::zero())
        } else {
            Vector2::new(T::zero(), T::one())
        };
        AffineScalar::new(g, T::zero())
    }

    #[inline]
    pub fn value(&self, x: Point2<T>) -> T {
        self.grad.dot(x) + self.offset
    }

    pub fn scaled(&self, s: T) -> Self {
        AffineScalar::new(self.grad * s, self.offset * s)
    }

    pub fn sub(&self, o: &Self) -> Self {
        AffineScalar::new(self.grad - o.grad, self.offset - o.offset)
    }

    pub fn add(&self, o: &Self) -> Self {
        AffineScalar::new(self.grad + o.grad, self.offset + o.offset)
    }
}

/// Signed distance to the line through `y1` and `y2`.
///
/// The function is `-(x - y2) . nu` where `nu` is the unit normal pointing to
/// the right of the direction `y1 -> y2`, so points to the left are positive.
pub fn signed_distance_line<T: Real>(y1: Point2<T>, y2: Point2<T>) -> Result<AffineScalar<T>> {
    let d = y2 - y1;
    let len = d.norm();
    if !(len > T::zero()) || !len.is_finite() {
        return Err(FemError::CoincidentPoints);
    }
    let nu = (d / len).perp_right();
    Ok(AffineScalar::new(-nu, nu.dot(y2)))
}

/// Unit right normal of the direction `y1 -> y2`.
pub(crate) fn right_normal<T: Real>(y1: Point2<T>, y2: Point2<T>) -> Result<Vector2<T>> {
    let d = y2 - y1;
    let len = d.norm();
    if !(len > T::zero()) {
        return Err(FemError::CoincidentPoints);
    }
    Ok((d / len).perp_right())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn x_axis_line_measures_height() {
        let l = signed_distance_line(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(l.value(Point2::new(0.3, 0.7)), 0.7);
        assert_relative_eq!(l.value(Point2::new(-2.0, -0.25)), -0.25);
    }

    #[test]
    fn vanishes_at_both_points() {
        let y1 = Point2::new(0.3f64, -1.2);
        let y2 = Point2::new(2.5, 0.4);
        let l = signed_distance_line(y1, y2).unwrap();
        assert!(l.value(y1).abs() < 1e-15);
        assert!(l.value(y2).abs() < 1e-15);
        assert_relative_eq!(l.grad.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_line_right_side_is_negative() {
        let l = signed_distance_line(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        // explicit dot product with the unit right normal (1/sqrt2, -1/sqrt2)
        let nu = (1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt());
        let x = (1.0, 0.0);
        let oracle = -((x.0 - 1.0) * nu.0 + (x.1 - 1.0) * nu.1);
        assert_relative_eq!(l.value(Point2::new(1.0, 0.0)), oracle, epsilon = 1e-15);
        assert_relative_eq!(oracle, -(2f64.sqrt()) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        let p = Point2::new(1.0, 2.0);
        assert!(matches!(
            signed_distance_line(p, p),
            Err(FemError::CoincidentPoints)
        ));
    }
}
