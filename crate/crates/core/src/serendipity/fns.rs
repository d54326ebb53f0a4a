use std::sync::Arc;

use crate::geometry::{AffineScalar, Point2, Vector2};
use crate::serendipity::generators::{combine, GeneratorFamily, ValueGrad};
use crate::Real;

/// A scalar shape function with an analytic gradient.
///
/// Nodal basis functions of an element are `Generated` rows; the other variants
/// compose explicit formulas from affine pieces.
#[derive(Clone, Debug)]
pub enum ScalarBasisFn<T> {
    Constant(T),
    Affine(AffineScalar<T>),
    Product(Vec<ScalarBasisFn<T>>),
    Power(Box<ScalarBasisFn<T>>, u32),
    Quotient(Box<ScalarBasisFn<T>>, Box<ScalarBasisFn<T>>),
    Combination(Vec<(T, ScalarBasisFn<T>)>),
    Generated {
        family: Arc<GeneratorFamily<T>>,
        coeffs: Vec<T>,
    },
}

impl<T: Real> ScalarBasisFn<T> {
    pub fn product(factors: Vec<ScalarBasisFn<T>>) -> Self {
        ScalarBasisFn::Product(factors)
    }

    pub fn power(base: ScalarBasisFn<T>, n: u32) -> Self {
        ScalarBasisFn::Power(Box::new(base), n)
    }

    pub fn quotient(num: ScalarBasisFn<T>, den: ScalarBasisFn<T>) -> Self {
        ScalarBasisFn::Quotient(Box::new(num), Box::new(den))
    }

    pub fn scaled(self, s: T) -> Self {
        ScalarBasisFn::Combination(vec![(s, self)])
    }

    pub fn eval(&self, x: Point2<T>) -> ValueGrad<T> {
        match self {
            ScalarBasisFn::Constant(c) => (*c, Vector2::zero()),
            ScalarBasisFn::Affine(a) => (a.value(x), a.grad),
            ScalarBasisFn::Product(fs) => {
                let mut v = T::one();
                let mut g = Vector2::zero();
                for f in fs {
                    let (fv, fg) = f.eval(x);
                    g = g * fv + fg * v;
                    v = v * fv;
                }
                (v, g)
            }
            ScalarBasisFn::Power(f, n) => {
                if *n == 0 {
                    return (T::one(), Vector2::zero());
                }
                let (fv, fg) = f.eval(x);
                let prev = fv.powi(*n as i32 - 1);
                (prev * fv, fg * (T::from_usize_lossy(*n as usize) * prev))
            }
            ScalarBasisFn::Quotient(a, b) => {
                let (av, ag) = a.eval(x);
                let (bv, bg) = b.eval(x);
                (av / bv, (ag * bv - bg * av) / (bv * bv))
            }
            ScalarBasisFn::Combination(terms) => {
                let mut v = T::zero();
                let mut g = Vector2::zero();
                for (c, f) in terms {
                    let (fv, fg) = f.eval(x);
                    v = v + *c * fv;
                    g += fg * *c;
                }
                (v, g)
            }
            ScalarBasisFn::Generated { family, coeffs } => combine(coeffs, &family.eval(x)),
        }
    }

    pub fn value(&self, x: Point2<T>) -> T {
        self.eval(x).0
    }

    pub fn gradient(&self, x: Point2<T>) -> Vector2<T> {
        self.eval(x).1
    }
}
