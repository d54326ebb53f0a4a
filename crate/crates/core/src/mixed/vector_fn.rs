use std::sync::Arc;

use crate::geometry::{Point2, Vector2};
use crate::serendipity::{combine, GeneratorFamily, ScalarBasisFn, ValueGrad};
use crate::Real;

/// Value and divergence of a vector field at a point.
pub type ValueDiv<T> = (Vector2<T>, T);

/// `Curl phi = (d phi / dy, -d phi / dx)`.
#[inline]
pub fn curl_vec<T: Real>(g: Vector2<T>) -> Vector2<T> {
    Vector2::new(g.y, -g.x)
}

/// Scaled monomials `X^a Y^b` with `X = (x - center) / scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledMonomials<T> {
    pub center: Point2<T>,
    pub scale: T,
    pub exponents: Vec<(usize, usize)>,
}

impl<T: Real> ScaledMonomials<T> {
    pub fn new(center: Point2<T>, scale: T, exponents: Vec<(usize, usize)>) -> Self {
        ScaledMonomials { center, scale, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self, m: usize) -> usize {
        self.exponents[m].0 + self.exponents[m].1
    }

    pub fn values_into(&self, x: Point2<T>, out: &mut Vec<T>) {
        let s = (x - self.center) / self.scale;
        out.clear();
        out.extend(
            self.exponents
                .iter()
                .map(|&(a, b)| s.x.powi(a as i32) * s.y.powi(b as i32)),
        );
    }

    pub fn values(&self, x: Point2<T>) -> Vec<T> {
        let mut out = Vec::new();
        self.values_into(x, &mut out);
        out
    }

    /// Value and gradient (in physical coordinates) of monomial `m`.
    pub fn eval(&self, m: usize, x: Point2<T>) -> ValueGrad<T> {
        let (a, b) = self.exponents[m];
        let s = (x - self.center) / self.scale;
        let pa = |u: T, k: usize| if k == 0 { T::one() } else { u.powi(k as i32) };
        let da = |u: T, k: usize| {
            if k == 0 {
                T::zero()
            } else {
                T::from_usize_lossy(k) * pa(u, k - 1)
            }
        };
        let v = pa(s.x, a) * pa(s.y, b);
        let g = Vector2::new(da(s.x, a) * pa(s.y, b), pa(s.x, a) * da(s.y, b)) / self.scale;
        (v, g)
    }
}

/// A vector shape function with an analytic divergence.
#[derive(Clone, Debug)]
pub enum VectorBasisFn<T> {
    Constant(Vector2<T>),
    Curl(ScalarBasisFn<T>),
    /// `(x - center) p(x)`.
    XTimes {
        center: Point2<T>,
        p: ScalarBasisFn<T>,
    },
    Combination(Vec<(T, VectorBasisFn<T>)>),
    /// `Curl(sum_g curl_g G_g) + (x - c) sum_m x_m M_m + constant`, the
    /// representation used by mixed elements.
    Generated {
        family: Arc<GeneratorFamily<T>>,
        monomials: Arc<ScaledMonomials<T>>,
        curl: Vec<T>,
        xpoly: Vec<T>,
        constant: Vector2<T>,
    },
}

/// The curl of a scalar function.
pub fn curl_of<T: Real>(phi: ScalarBasisFn<T>) -> VectorBasisFn<T> {
    VectorBasisFn::Curl(phi)
}

impl<T: Real> VectorBasisFn<T> {
    pub fn eval(&self, x: Point2<T>) -> ValueDiv<T> {
        match self {
            VectorBasisFn::Constant(c) => (*c, T::zero()),
            VectorBasisFn::Curl(phi) => (curl_vec(phi.gradient(x)), T::zero()),
            VectorBasisFn::XTimes { center, p } => {
                let (pv, pg) = p.eval(x);
                let d = x - *center;
                (d * pv, T::lit(2.0) * pv + d.dot(pg))
            }
            VectorBasisFn::Combination(terms) => {
                terms
                    .iter()
                    .fold((Vector2::zero(), T::zero()), |(v, dv), (c, f)| {
                        let (fv, fd) = f.eval(x);
                        (v + fv * *c, dv + fd * *c)
                    })
            }
            VectorBasisFn::Generated {
                family,
                monomials,
                curl,
                xpoly,
                constant,
            } => {
                let gens = family.eval(x);
                let (_, g) = combine(curl, &gens);
                let mons = monomials.values(x);
                let mut p = T::zero();
                let mut div = T::zero();
                for (m, (&c, &mv)) in xpoly.iter().zip(&mons).enumerate() {
                    p = p + c * mv;
                    div = div + c * mv * T::from_usize_lossy(2 + monomials.degree(m));
                }
                (curl_vec(g) + (x - monomials.center) * p + *constant, div)
            }
        }
    }

    pub fn value(&self, x: Point2<T>) -> Vector2<T> {
        self.eval(x).0
    }

    pub fn divergence(&self, x: Point2<T>) -> T {
        self.eval(x).1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AffineScalar;

    #[test]
    fn curl_of_coordinate() {
        let f = curl_of(ScalarBasisFn::Affine(AffineScalar::<f64>::coordinate(0)));
        let (v, d) = f.eval(Point2::new(0.3, 0.8));
        assert_eq!((v.x, v.y, d), (0.0, -1.0, 0.0));
    }

    #[test]
    fn curl_of_xy() {
        let xy = ScalarBasisFn::product(vec![
            ScalarBasisFn::Affine(AffineScalar::<f64>::coordinate(0)),
            ScalarBasisFn::Affine(AffineScalar::coordinate(1)),
        ]);
        let x = Point2::new(0.4, -1.5);
        let (v, d) = curl_of(xy).eval(x);
        assert!((v.x - 0.4).abs() < 1e-15 && (v.y - 1.5).abs() < 1e-15);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn x_times_divergence_matches_finite_differences() {
        let p = ScalarBasisFn::product(vec![
            ScalarBasisFn::Affine(AffineScalar::new(Vector2::new(1.0f64, 2.0), 0.5)),
            ScalarBasisFn::Affine(AffineScalar::new(Vector2::new(-0.3, 0.7), 1.0)),
        ]);
        let f = VectorBasisFn::XTimes {
            center: Point2::new(0.1, 0.2),
            p,
        };
        let x = Point2::new(0.35, -0.45);
        let h = 1e-6;
        let fd = (f.value(x + Vector2::new(h, 0.0)).x - f.value(x - Vector2::new(h, 0.0)).x
            + f.value(x + Vector2::new(0.0, h)).y
            - f.value(x - Vector2::new(0.0, h)).y)
            / (2.0 * h);
        let d = f.divergence(x);
        assert!((fd - d).abs() < 1e-5 * d.abs().max(1.0));
    }

    #[test]
    fn monomial_gradient() {
        let m = ScaledMonomials::new(Point2::new(0.5f64, 0.5), 2.0, vec![(2, 1)]);
        let x = Point2::new(1.3, -0.1);
        let (v, g) = m.eval(0, x);
        let (sx, sy) = ((1.3 - 0.5) / 2.0, (-0.1 - 0.5) / 2.0);
        assert!((v - sx * sx * sy).abs() < 1e-15);
        assert!((g.x - 2.0 * sx * sy / 2.0).abs() < 1e-15);
        assert!((g.y - sx * sx / 2.0).abs() < 1e-15);
    }
}
