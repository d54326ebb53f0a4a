use crate::geometry::{Point2, Vector2};
use crate::Real;

/// Manufactured solutions of `-Laplace p = f`; the flux is `u = -grad p`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactSolution<T> {
    /// `sin(pi x) sin(pi y)`.
    OneHump,
    /// `sin(2 pi x) sin(2 pi y)`.
    FourHump,
    /// `sum c x^a y^b` over `(a, b, c)`.
    Polynomial(Vec<(usize, usize, T)>),
    Zero,
}

fn ipow<T: Real>(x: T, k: usize) -> T {
    if k == 0 {
        T::one()
    } else {
        x.powi(k as i32)
    }
}

impl<T: Real> ExactSolution<T> {
    fn freq(&self) -> T {
        match self {
            ExactSolution::FourHump => T::lit(2.0) * T::PI(),
            _ => T::PI(),
        }
    }

    pub fn p(&self, x: Point2<T>) -> T {
        match self {
            ExactSolution::OneHump | ExactSolution::FourHump => {
                let k = self.freq();
                (k * x.x).sin() * (k * x.y).sin()
            }
            ExactSolution::Polynomial(terms) => terms
                .iter()
                .map(|&(a, b, c)| c * ipow(x.x, a) * ipow(x.y, b))
                .sum(),
            ExactSolution::Zero => T::zero(),
        }
    }

    pub fn grad_p(&self, x: Point2<T>) -> Vector2<T> {
        match self {
            ExactSolution::OneHump | ExactSolution::FourHump => {
                let k = self.freq();
                Vector2::new(
                    k * (k * x.x).cos() * (k * x.y).sin(),
                    k * (k * x.x).sin() * (k * x.y).cos(),
                )
            }
            ExactSolution::Polynomial(terms) => {
                terms.iter().fold(Vector2::zero(), |g, &(a, b, c)| {
                    let da = if a == 0 {
                        T::zero()
                    } else {
                        T::from_usize_lossy(a) * ipow(x.x, a - 1) * ipow(x.y, b)
                    };
                    let db = if b == 0 {
                        T::zero()
                    } else {
                        T::from_usize_lossy(b) * ipow(x.x, a) * ipow(x.y, b - 1)
                    };
                    g + Vector2::new(da, db) * c
                })
            }
            ExactSolution::Zero => Vector2::zero(),
        }
    }

    pub fn laplacian(&self, x: Point2<T>) -> T {
        match self {
            ExactSolution::OneHump | ExactSolution::FourHump => {
                let k = self.freq();
                -T::lit(2.0) * k * k * self.p(x)
            }
            ExactSolution::Polynomial(terms) => terms
                .iter()
                .map(|&(a, b, c)| {
                    let xx = if a < 2 {
                        T::zero()
                    } else {
                        T::from_usize_lossy(a * (a - 1)) * ipow(x.x, a - 2) * ipow(x.y, b)
                    };
                    let yy = if b < 2 {
                        T::zero()
                    } else {
                        T::from_usize_lossy(b * (b - 1)) * ipow(x.x, a) * ipow(x.y, b - 2)
                    };
                    c * (xx + yy)
                })
                .sum(),
            ExactSolution::Zero => T::zero(),
        }
    }

    /// Source term `f = -Laplace p`.
    pub fn f(&self, x: Point2<T>) -> T {
        -self.laplacian(x)
    }

    /// Flux `u = -grad p`.
    pub fn u(&self, x: Point2<T>) -> Vector2<T> {
        -self.grad_p(x)
    }

    /// `div u = f`.
    pub fn div_u(&self, x: Point2<T>) -> T {
        self.f(x)
    }
}
