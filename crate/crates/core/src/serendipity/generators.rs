//! Shared building blocks of the serendipity spaces.
//!
//! Every nodal basis function of a serendipity element is stored as a coefficient
//! row over the generators of one [`GeneratorFamily`], which evaluates all of them
//! together at a point.

use crate::error::Result;
use crate::geometry::{AffineScalar, LambdaPairChoice, Point2, Polygon, Vector2};
use crate::Real;

/// One generating function of the serendipity space of index `r` on an `N`-gon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Product of all `lambda_m` except the two edges meeting at vertex `i`.
    Vertex(usize),
    /// Product of all `lambda_m` except `lambda_edge`, times `t^power` for the
    /// edge parameter `t` in `[0, 1]`.
    EdgePoly { edge: usize, power: usize },
    /// `(prod_{m != k, l} lambda_m) lambda_{k,l}^p lambda_l / (lambda_k + lambda_l)`,
    /// which is supported on edge `k` only among the edges.
    Pair { k: usize, l: usize },
    /// Bubble `lambda_1 ... lambda_N` times the scaled monomial `X^a Y^b` about the centroid.
    Bubble { a: usize, b: usize },
}

/// Evaluator for every generator of the space of index `r` on one polygon.
#[derive(Clone, Debug)]
pub struct GeneratorFamily<T> {
    polygon: Polygon<T>,
    r: usize,
    exponent: usize,
    generators: Vec<Generator>,
    // pair lines indexed by k * N + l, symmetric
    pair_lines: Vec<Option<AffineScalar<T>>>,
    center: Point2<T>,
    scale: T,
}

/// Value and gradient of a scalar function at a point.
pub type ValueGrad<T> = (T, Vector2<T>);

/// Scaled monomial exponents `(a, b)` of total degree at most `deg`, ordered by degree.
pub fn monomial_exponents(deg: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in 0..=deg {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

/// Integer power with its gradient, `(u^n, n u^{n-1} grad u)`.
fn pow_vg<T: Real>(u: T, du: Vector2<T>, n: usize) -> ValueGrad<T> {
    match n {
        0 => (T::one(), Vector2::zero()),
        _ => {
            let prev = u.powi(n as i32 - 1);
            (prev * u, du * (T::from_usize_lossy(n) * prev))
        }
    }
}

impl<T: Real> GeneratorFamily<T> {
    /// Generators of the serendipity space of index `r >= N - 2`.
    pub fn new(polygon: &Polygon<T>, r: usize, choice: LambdaPairChoice) -> Result<Self> {
        let n = polygon.num_vertices();
        assert!(r + 2 >= n, "generator family needs r >= N - 2");
        let exponent = r + 2 - n;
        let mut generators = Vec::new();
        for i in 0..n {
            generators.push(Generator::Vertex(i));
        }
        for edge in 0..n {
            for power in 0..exponent {
                generators.push(Generator::EdgePoly { edge, power });
            }
        }
        let mut pair_lines = vec![None; n * n];
        for k in 0..n {
            for l in 0..n {
                if polygon.are_adjacent(k, l) {
                    continue;
                }
                generators.push(Generator::Pair { k, l });
                if exponent > 0 && k < l {
                    let line = polygon.lambda_pair_with(k, l, choice)?;
                    pair_lines[k * n + l] = Some(line);
                    pair_lines[l * n + k] = Some(line);
                }
            }
        }
        if r >= n {
            for (a, b) in monomial_exponents(r - n) {
                generators.push(Generator::Bubble { a, b });
            }
        }
        Ok(GeneratorFamily {
            polygon: polygon.clone(),
            r,
            exponent,
            generators,
            pair_lines,
            center: polygon.centroid(),
            scale: polygon.diameter(),
        })
    }

    pub fn polygon(&self) -> &Polygon<T> {
        &self.polygon
    }

    /// Index of the serendipity space these generators belong to.
    pub fn order(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        self.generators.iter().position(|&h| h == g)
    }

    /// The pair line used for edges `k` and `l`, if one is needed.
    pub fn pair_line(&self, k: usize, l: usize) -> Option<&AffineScalar<T>> {
        self.pair_lines[k * self.polygon.num_vertices() + l].as_ref()
    }

    /// Scaled coordinates `((x - c) / h, (y - c) / h)` used by the bubble monomials.
    pub fn scaled(&self, x: Point2<T>) -> Point2<T> {
        (x - self.center) / self.scale
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// Values and gradients of all generators at `x`, written into `out`.
    pub fn eval_into(&self, x: Point2<T>, out: &mut Vec<ValueGrad<T>>) {
        let e = &self.polygon;
        let n = e.num_vertices();
        let lam: Vec<T> = e.edge_distance_functions().iter().map(|l| l.value(x)).collect();
        let dl: Vec<Vector2<T>> = e.edge_distance_functions().iter().map(|l| l.grad).collect();
        let prod = |skip: &[usize]| -> ValueGrad<T> {
            let mut v = T::one();
            let mut g = Vector2::zero();
            for m in 0..n {
                if skip.contains(&m) {
                    continue;
                }
                g = g * lam[m] + dl[m] * v;
                v = v * lam[m];
            }
            (v, g)
        };
        out.clear();
        out.reserve(self.generators.len());
        let mut all: Option<ValueGrad<T>> = None;
        for &gen in &self.generators {
            let vg = match gen {
                Generator::Vertex(i) => prod(&[i, (i + 1) % n]),
                Generator::EdgePoly { edge, power } => {
                    let (p, dp) = prod(&[edge]);
                    let (a, _) = e.edge(edge);
                    let len = e.edge_length(edge);
                    let tau = e.tangent(edge);
                    let t = (x - a).dot(tau) / len;
                    let (tp, dtp) = pow_vg(t, tau / len, power);
                    (p * tp, dp * tp + dtp * p)
                }
                Generator::Pair { k, l } => {
                    let (p, dp) = prod(&[k, l]);
                    let (lv, dlv) = match self.pair_line(k, l) {
                        Some(line) => pow_vg(line.value(x), line.grad, self.exponent),
                        None => (T::one(), Vector2::zero()),
                    };
                    let s = lam[k] + lam[l];
                    let rr = lam[l] / s;
                    let drr = (dl[l] * lam[k] - dl[k] * lam[l]) / (s * s);
                    let pl = p * lv;
                    let dpl = dp * lv + dlv * p;
                    (pl * rr, dpl * rr + drr * pl)
                }
                Generator::Bubble { a, b } => {
                    let (p, dp) = *all.get_or_insert_with(|| prod(&[]));
                    let xs = self.scaled(x);
                    let inv_h = T::one() / self.scale;
                    let (xa, dxa) = pow_vg(xs.x, Vector2::new(inv_h, T::zero()), a);
                    let (yb, dyb) = pow_vg(xs.y, Vector2::new(T::zero(), inv_h), b);
                    let m = xa * yb;
                    let dm = dxa * yb + dyb * xa;
                    (p * m, dp * m + dm * p)
                }
            };
            out.push(vg);
        }
    }

    pub fn eval(&self, x: Point2<T>) -> Vec<ValueGrad<T>> {
        let mut out = Vec::new();
        self.eval_into(x, &mut out);
        out
    }

    /// Values only, for assembling point-evaluation matrices.
    pub fn values(&self, x: Point2<T>) -> Vec<T> {
        self.eval(x).into_iter().map(|(v, _)| v).collect()
    }
}

/// Dot product of a coefficient row with evaluated generators.
pub fn combine<T: Real>(coeffs: &[T], gens: &[ValueGrad<T>]) -> ValueGrad<T> {
    let mut v = T::zero();
    let mut g = Vector2::zero();
    for (&c, &(gv, gg)) in coeffs.iter().zip(gens) {
        if c != T::zero() {
            v = v + c * gv;
            g += gg * c;
        }
    }
    (v, g)
}
