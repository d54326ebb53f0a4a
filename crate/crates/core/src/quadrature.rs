//! Gauss rules on triangles, convex polygons and polygon edges.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{FemError, Result};
use crate::geometry::{Point2, Polygon};
use crate::Real;

/// Largest polynomial degree accepted by the rule constructors.
pub const MAX_DEGREE: usize = 60;

/// Quadrature points and weights in physical coordinates.
#[derive(Clone, Debug)]
pub struct QuadRule<T> {
    pub points: Vec<Point2<T>>,
    pub weights: Vec<T>,
}

/// Gauss points on one polygon edge.
///
/// `params` holds the edge parameter in `[0, 1]` measured from the start vertex.
#[derive(Clone, Debug)]
pub struct EdgeRule<T> {
    pub points: Vec<Point2<T>>,
    pub params: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn measure(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(Point2<T>) -> T) -> T {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

impl<T: Real> EdgeRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(Point2<T>, T) -> T) -> T {
        (0..self.len())
            .map(|k| self.weights[k] * f(self.points[k], self.params[k]))
            .sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Family {
    Legendre,
    Jacobi10,
}

type Rule1d = Arc<(Vec<f64>, Vec<f64>)>;

fn cache() -> &'static Mutex<HashMap<(Family, usize), Rule1d>> {
    static CACHE: OnceLock<Mutex<HashMap<(Family, usize), Rule1d>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn rule_1d(fam: Family, n: usize) -> Rule1d {
    if let Some(r) = cache().lock().unwrap().get(&(fam, n)) {
        return r.clone();
    }
    let r = Arc::new(golub_welsch(fam, n));
    cache().lock().unwrap().insert((fam, n), r.clone());
    r
}

// Nodes and weights on [-1, 1] from the eigen-decomposition of the Jacobi matrix.
fn golub_welsch(fam: Family, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (alpha, beta) = match fam {
        Family::Legendre => (0.0, 0.0),
        Family::Jacobi10 => (1.0, 0.0),
    };
    let ab = alpha + beta;
    // integral of the weight function over [-1, 1]; 2 for both families
    let mu0 = 2.0;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        j[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + ab;
            let b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
            j[(k, k + 1)] = b2.sqrt();
            j[(k + 1, k)] = b2.sqrt();
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(FemError::InvalidArgument(format!(
            "quadrature degree {degree} exceeds {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Gauss-Legendre rule on `[0, 1]`, exact up to `degree`.
pub fn gauss_legendre_unit<T: Real>(degree: usize) -> Result<(Vec<T>, Vec<T>)> {
    check_degree(degree)?;
    let n = degree / 2 + 1;
    let r = rule_1d(Family::Legendre, n);
    Ok((
        r.0.iter().map(|&x| T::lit(0.5 * (x + 1.0))).collect(),
        r.1.iter().map(|&w| T::lit(0.5 * w)).collect(),
    ))
}

/// Collapsed tensor rule on the triangle `(0,0), (1,0), (0,1)`, exact up to `degree`.
pub fn triangle_gauss<T: Real>(degree: usize) -> Result<QuadRule<T>> {
    check_degree(degree)?;
    let m = (degree + 2) / 2;
    let gl = rule_1d(Family::Legendre, m);
    let gj = rule_1d(Family::Jacobi10, m);
    let mut points = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for (&eta, &we) in gj.0.iter().zip(&gj.1) {
        let y = 0.5 * (1.0 + eta);
        for (&xi, &wx) in gl.0.iter().zip(&gl.1) {
            let x = 0.5 * (1.0 + xi) * (1.0 - y);
            points.push(Point2::new(T::lit(x), T::lit(y)));
            weights.push(T::lit(wx * we / 8.0));
        }
    }
    Ok(QuadRule { points, weights })
}

/// Composite rule on the fan of triangles joining the centroid to each edge.
pub fn polygon_rule<T: Real>(e: &Polygon<T>, degree: usize) -> Result<QuadRule<T>> {
    let tri = triangle_gauss::<T>(degree)?;
    let c = e.centroid();
    let n = e.num_vertices();
    let mut points = Vec::with_capacity(n * tri.len());
    let mut weights = Vec::with_capacity(n * tri.len());
    for i in 0..n {
        let (a, b) = e.edge(i);
        let (da, db) = (a - c, b - c);
        let jac = da.cross(db).abs();
        for (p, &w) in tri.points.iter().zip(&tri.weights) {
            points.push(c + da * p.x + db * p.y);
            weights.push(w * jac);
        }
    }
    Ok(QuadRule { points, weights })
}

/// Gauss-Legendre rule on edge `i` of `e`, exact up to `degree`.
pub fn edge_rule<T: Real>(e: &Polygon<T>, i: usize, degree: usize) -> Result<EdgeRule<T>> {
    segment_rule(e.edge(i).0, e.edge(i).1, degree)
}

/// Gauss-Legendre rule on the segment from `a` to `b`.
pub fn segment_rule<T: Real>(a: Point2<T>, b: Point2<T>, degree: usize) -> Result<EdgeRule<T>> {
    let (t, w) = gauss_legendre_unit::<T>(degree)?;
    let len = a.distance(b);
    Ok(EdgeRule {
        points: t.iter().map(|&s| a.lerp(b, s)).collect(),
        weights: w.iter().map(|&x| x * len).collect(),
        params: t,
    })
}
