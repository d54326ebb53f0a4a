use rand::Rng;

use crate::geometry::{Point2, Polygon};
use crate::Real;

/// Random strictly convex `n`-gon with shape regularity at least `min_sigma`.
///
/// Vertices sit at jittered angles on a circle of jittered radius about the
/// origin; candidates are rejected until the regularity bound holds.
pub fn random_convex_polygon<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    min_sigma: f64,
) -> Polygon<T> {
    let two_pi = std::f64::consts::TAU;
    loop {
        let phase = rng.gen_range(0.0..two_pi);
        let verts: Vec<Point2<T>> = (0..n)
            .map(|k| {
                let th = phase + two_pi * (k as f64 + rng.gen_range(-0.3..0.3)) / n as f64;
                let rad = rng.gen_range(0.8..1.2);
                Point2::new(T::lit(rad * th.cos()), T::lit(rad * th.sin()))
            })
            .collect();
        if let Ok(p) = Polygon::new(verts) {
            if p.shape_regularity().sigma.to_f64_lossy() >= min_sigma {
                return p;
            }
        }
    }
}
