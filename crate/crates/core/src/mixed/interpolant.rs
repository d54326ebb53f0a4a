use crate::error::Result;
use crate::geometry::{Point2, Vector2};
use crate::linalg::{DenseMatrix, Lu};
use crate::mixed::element::{MixedElement, MixedScratch};
use crate::mixed::vector_fn::curl_vec;
use crate::quadrature::{edge_rule, polygon_rule};
use crate::serendipity::Generator;
use crate::Real;

/// The local projection defined by edge flux moments, divergence moments and
/// (when present) bubble moments.
#[derive(Clone, Debug)]
pub struct MixedInterpolant<T> {
    degree: usize,
    row_scale: Vec<T>,
    lu: Lu<T>,
    condition: f64,
}

impl<T: Real> MixedInterpolant<T> {
    /// Factors the degree-of-freedom matrix using rules exact to `degree`.
    pub fn new(elem: &MixedElement<T>, degree: usize) -> Result<Self> {
        let dim = elem.dim();
        let mut scratch = MixedScratch::default();
        let mut vals = Vec::new();
        let cols = |x: Point2<T>, scratch: &mut MixedScratch<T>, vals: &mut Vec<_>| {
            elem.eval_all_into(x, scratch, vals);
            vals.iter().map(|&(v, _): &(Vector2<T>, T)| v).collect::<Vec<_>>()
        };
        let raw = dof_values(elem, degree, |x| cols(x, &mut scratch, &mut vals), dim)?;
        let row_scale: Vec<T> = (0..dim)
            .map(|i| {
                let m = raw.row(i).iter().fold(T::zero(), |a, &b| a.max(b.abs()));
                if m > T::zero() {
                    T::one() / m
                } else {
                    T::one()
                }
            })
            .collect();
        let a = DenseMatrix::from_fn(dim, dim, |i, j| raw[(i, j)] * row_scale[i]);
        let lu = Lu::factor(a)?;
        let condition = lu.condition_estimate().to_f64_lossy();
        Ok(MixedInterpolant {
            degree,
            row_scale,
            lu,
            condition,
        })
    }

    /// Condition estimate of the row-equilibrated degree-of-freedom matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Coefficients of the projection of `v`.
    pub fn project(&self, elem: &MixedElement<T>, v: impl Fn(Point2<T>) -> Vector2<T>) -> Result<Vec<T>> {
        let d = dof_values(elem, self.degree, |x| vec![v(x)], 1)?;
        let rhs: Vec<T> = (0..d.rows()).map(|i| d[(i, 0)] * self.row_scale[i]).collect();
        Ok(self.lu.solve(&rhs))
    }
}

/// Default quadrature degree of the interpolation moments.
pub fn interpolant_degree<T: Real>(elem: &MixedElement<T>) -> usize {
    (2 * elem.order() + 6).max(24)
}

/// Projection of `v` onto the element.
pub fn mixed_interpolant<T: Real>(
    elem: &MixedElement<T>,
    v: impl Fn(Point2<T>) -> Vector2<T>,
) -> Result<Vec<T>> {
    let degree = interpolant_degree(elem);
    MixedInterpolant::new(elem, degree)?.project(elem, v)
}

/// Applies every degree of freedom to each of `ncols` fields produced together by `f`.
///
/// Rows are ordered edge moments (edge-major, against `t^k`, `k = 0..=r`), moments
/// against the gradients of the nonconstant monomials, then bubble curl moments.
pub fn dof_values<T: Real>(
    elem: &MixedElement<T>,
    degree: usize,
    mut f: impl FnMut(Point2<T>) -> Vec<Vector2<T>>,
    ncols: usize,
) -> Result<DenseMatrix<T>> {
    let e = elem.polygon();
    let n = e.num_vertices();
    let r = elem.order();
    let mons = elem.monomials();
    let h = mons.scale;
    let ds = elem.serendipity();
    let family = ds.family();
    let bubbles: Vec<usize> = family
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| matches!(g, Generator::Bubble { .. }))
        .map(|(k, _)| k)
        .take(ds.num_interior())
        .collect();
    let ndof = n * (r + 1) + (mons.len() - 1) + bubbles.len();
    let mut out = DenseMatrix::zeros(ndof, ncols);

    for i in 0..n {
        let rule = edge_rule(e, i, degree + r)?;
        let nu = e.normal(i);
        for q in 0..rule.len() {
            let vals = f(rule.points[q]);
            let t = rule.params[q];
            let mut tk = rule.weights[q];
            for k in 0..=r {
                let row = out.row_mut(i * (r + 1) + k);
                for (o, v) in row.iter_mut().zip(&vals) {
                    *o = *o + tk * v.dot(nu);
                }
                tk = tk * t;
            }
        }
    }

    let rule = polygon_rule(e, degree + r)?;
    let base = n * (r + 1);
    let mut gens = Vec::new();
    for q in 0..rule.len() {
        let x = rule.points[q];
        let w = rule.weights[q];
        let vals = f(x);
        for m in 1..mons.len() {
            let g = mons.eval(m, x).1 * (h * w);
            let row = out.row_mut(base + m - 1);
            for (o, v) in row.iter_mut().zip(&vals) {
                *o = *o + v.dot(g);
            }
        }
        if !bubbles.is_empty() {
            family.eval_into(x, &mut gens);
            for (b, &k) in bubbles.iter().enumerate() {
                let c = curl_vec(gens[k].1) * w;
                let row = out.row_mut(base + mons.len() - 1 + b);
                for (o, v) in row.iter_mut().zip(&vals) {
                    *o = *o + v.dot(c);
                }
            }
        }
    }
    Ok(out)
}
