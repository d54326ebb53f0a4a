use crate::error::{FemError, Result};
use crate::geometry::affine::right_normal;
use crate::geometry::{signed_distance_line, AffineScalar, Point2, Vector2};
use crate::Real;

/// Relative threshold on consecutive edge cross products, scaled by `h^2`.
pub const CONVEXITY_TOL: f64 = 1e-12;

/// Reasons a vertex loop is not an admissible element.
#[derive(Clone, Debug, PartialEq)]
pub enum PolygonDefect {
    TooFewVertices(usize),
    NonFinite,
    RepeatedVertex(usize),
    Clockwise,
    /// Interior angle at the given vertex is reflex or straight.
    NotStrictlyConvex(usize),
}

impl std::fmt::Display for PolygonDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolygonDefect::TooFewVertices(n) => write!(f, "{n} vertices, need at least 3"),
            PolygonDefect::NonFinite => write!(f, "non-finite coordinate"),
            PolygonDefect::RepeatedVertex(i) => write!(f, "vertex {i} repeats its predecessor"),
            PolygonDefect::Clockwise => write!(f, "vertex loop is clockwise"),
            PolygonDefect::NotStrictlyConvex(i) => {
                write!(f, "angle at vertex {i} is not strictly convex")
            }
        }
    }
}

/// A strictly convex polygon with counterclockwise vertices.
///
/// Edge `i` runs from vertex `i - 1` to vertex `i` (indices mod `N`), so vertex
/// `i` is the common endpoint of edges `i` and `i + 1`.
#[derive(Clone, Debug)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
    normals: Vec<Vector2<T>>,
    tangents: Vec<Vector2<T>>,
    lengths: Vec<T>,
    lambdas: Vec<AffineScalar<T>>,
    centroid: Point2<T>,
    area: T,
    diameter: T,
}

/// How the pair lines `lambda_{i,j}` are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LambdaPairChoice {
    /// Line through the midpoints of the two edges.
    #[default]
    Midpoint,
    /// Normalized difference of the two vertex-to-vertex lines; verified at
    /// construction to cross both edges.
    Simple,
}

/// Shape-regularity measures of one polygon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularityReport<T> {
    pub h: T,
    pub rho: T,
    pub sigma: T,
}

/// Checks the polygon invariants on a raw vertex loop.
pub fn validate_loop<T: Real>(vertices: &[Point2<T>]) -> std::result::Result<(), PolygonDefect> {
    let n = vertices.len();
    if n < 3 {
        return Err(PolygonDefect::TooFewVertices(n));
    }
    if vertices.iter().any(|v| !v.is_finite()) {
        return Err(PolygonDefect::NonFinite);
    }
    let h = diameter_of(vertices);
    let tiny = h * T::lit(1e-14);
    for i in 0..n {
        if vertices[i].distance(vertices[(i + n - 1) % n]) <= tiny {
            return Err(PolygonDefect::RepeatedVertex(i));
        }
    }
    if signed_area(vertices) <= T::zero() {
        return Err(PolygonDefect::Clockwise);
    }
    let tol = T::lit(CONVEXITY_TOL) * h * h;
    for i in 0..n {
        let a = vertices[(i + n - 1) % n];
        let b = vertices[i];
        let c = vertices[(i + 1) % n];
        if (b - a).cross(c - b) <= tol {
            return Err(PolygonDefect::NotStrictlyConvex(i));
        }
    }
    Ok(())
}

pub(crate) fn signed_area<T: Real>(v: &[Point2<T>]) -> T {
    let n = v.len();
    let mut s = T::zero();
    for i in 0..n {
        s = s + v[i].cross(v[(i + 1) % n]);
    }
    s * T::lit(0.5)
}

fn diameter_of<T: Real>(v: &[Point2<T>]) -> T {
    let mut h = T::zero();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            h = h.max(v[i].distance(v[j]));
        }
    }
    h
}

impl<T: Real> Polygon<T> {
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        validate_loop(&vertices).map_err(|d| FemError::InvalidPolygon(d.to_string()))?;
        let n = vertices.len();
        let mut normals = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        let mut lambdas = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[(i + n - 1) % n];
            let b = vertices[i];
            let len = a.distance(b);
            let tau = (b - a) / len;
            normals.push(tau.perp_right());
            tangents.push(tau);
            lengths.push(len);
            lambdas.push(signed_distance_line(a, b)?);
        }
        let area = signed_area(&vertices);
        let mut c = Point2::zero();
        for i in 0..n {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            c += (p + q) * p.cross(q);
        }
        let centroid = c / (T::lit(6.0) * area);
        let diameter = diameter_of(&vertices);
        Ok(Polygon {
            vertices,
            normals,
            tangents,
            lengths,
            lambdas,
            centroid,
            area,
            diameter,
        })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Polygon::new(
            coords
                .iter()
                .map(|&(x, y)| Point2::new(T::lit(x), T::lit(y)))
                .collect(),
        )
    }

    /// Regular `n`-gon inscribed in the circle of given radius about `center`,
    /// first vertex at angle `phase`.
    pub fn regular(n: usize, center: Point2<T>, radius: T, phase: T) -> Result<Self> {
        let two_pi = T::PI() + T::PI();
        let verts = (0..n)
            .map(|k| {
                let th = phase + two_pi * T::from_usize_lossy(k) / T::from_usize_lossy(n);
                center + Point2::new(th.cos(), th.sin()) * radius
            })
            .collect();
        Polygon::new(verts)
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    /// Vertex `i` with the index taken mod `N`.
    #[inline]
    pub fn vertex(&self, i: isize) -> Point2<T> {
        self.vertices[self.wrap(i)]
    }

    #[inline]
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.vertices.len() as isize) as usize
    }

    /// Start and end of edge `i`.
    #[inline]
    pub fn edge(&self, i: usize) -> (Point2<T>, Point2<T>) {
        (self.vertex(i as isize - 1), self.vertices[i])
    }

    #[inline]
    pub fn normal(&self, i: usize) -> Vector2<T> {
        self.normals[i]
    }

    #[inline]
    pub fn tangent(&self, i: usize) -> Vector2<T> {
        self.tangents[i]
    }

    #[inline]
    pub fn edge_length(&self, i: usize) -> T {
        self.lengths[i]
    }

    pub fn edge_midpoint(&self, i: usize) -> Point2<T> {
        let (a, b) = self.edge(i);
        (a + b) * T::lit(0.5)
    }

    /// Point of edge `i` at parameter `t in [0, 1]` from its start vertex.
    pub fn edge_point(&self, i: usize, t: T) -> Point2<T> {
        let (a, b) = self.edge(i);
        a.lerp(b, t)
    }

    #[inline]
    pub fn centroid(&self) -> Point2<T> {
        self.centroid
    }

    #[inline]
    pub fn area(&self) -> T {
        self.area
    }

    #[inline]
    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn min_edge_length(&self) -> T {
        self.lengths
            .iter()
            .copied()
            .fold(T::infinity(), |a, b| a.min(b))
    }

    /// Distance functions to the edges, `lambda_i = 0` on edge `i`, positive inside.
    pub fn edge_distance_functions(&self) -> &[AffineScalar<T>] {
        &self.lambdas
    }

    #[inline]
    pub fn lambda(&self, i: usize) -> &AffineScalar<T> {
        &self.lambdas[i]
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.num_vertices();
        let d = (i as isize - j as isize).rem_euclid(n as isize) as usize;
        d <= 1 || d == n - 1
    }

    /// The pair line `lambda_{i,j}` for nonadjacent edges, with the default choice.
    pub fn lambda_pair(&self, i: usize, j: usize) -> Result<AffineScalar<T>> {
        self.lambda_pair_with(i, j, LambdaPairChoice::Midpoint)
    }

    /// The pair line `lambda_{i,j}`. The result is symmetric in `(i, j)`.
    pub fn lambda_pair_with(
        &self,
        i: usize,
        j: usize,
        choice: LambdaPairChoice,
    ) -> Result<AffineScalar<T>> {
        if self.are_adjacent(i, j) {
            return Err(FemError::AdjacentEdges(i, j));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let line = match choice {
            LambdaPairChoice::Midpoint => {
                signed_distance_line(self.edge_midpoint(i), self.edge_midpoint(j))?
            }
            LambdaPairChoice::Simple => {
                let ii = i as isize;
                let jj = j as isize;
                let a = signed_distance_line(self.vertex(jj), self.vertex(ii - 1))?;
                let b = signed_distance_line(self.vertex(ii), self.vertex(jj - 1))?;
                let na = right_normal(self.vertex(jj), self.vertex(ii - 1))?;
                let nb = right_normal(self.vertex(ii), self.vertex(jj - 1))?;
                let denom = (na - nb).norm();
                if !(denom > T::lit(1e-14)) {
                    return Err(FemError::InvalidPolygon(format!(
                        "simple pair line for edges ({i}, {j}) is undefined"
                    )));
                }
                a.sub(&b).scaled(T::one() / denom)
            }
        };
        if !self.pair_line_crosses(&line, i) || !self.pair_line_crosses(&line, j) {
            return Err(FemError::InvalidPolygon(format!(
                "pair line for edges ({i}, {j}) does not cross both edges"
            )));
        }
        Ok(line)
    }

    /// Whether the zero line of `l` meets the closed segment of edge `i`.
    pub fn pair_line_crosses(&self, l: &AffineScalar<T>, i: usize) -> bool {
        let (a, b) = self.edge(i);
        let tol = T::lit(1e-12) * self.diameter;
        let (la, lb) = (l.value(a), l.value(b));
        la * lb <= T::zero() || la.abs() <= tol || lb.abs() <= tol
    }

    /// Diameter, inscribed-circle measure and their ratio.
    ///
    /// `rho` is twice the smallest incircle diameter over all triangles formed
    /// by three vertices of the polygon.
    pub fn shape_regularity(&self) -> RegularityReport<T> {
        let v = &self.vertices;
        let n = v.len();
        let mut min_d = T::infinity();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    min_d = min_d.min(incircle_diameter(v[a], v[b], v[c]));
                }
            }
        }
        let rho = T::lit(2.0) * min_d;
        RegularityReport {
            h: self.diameter,
            rho,
            sigma: rho / self.diameter,
        }
    }

    /// Whether `p` lies in the closed polygon, up to a tolerance relative to `h`.
    pub fn contains(&self, p: Point2<T>) -> bool {
        let tol = T::lit(1e-12) * self.diameter;
        self.lambdas.iter().all(|l| l.value(p) >= -tol)
    }

    /// Image of this polygon under a vertex map.
    pub fn transformed(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Result<Self> {
        Polygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }
}

fn incircle_diameter<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    let area = ((b - a).cross(c - a)).abs() * T::lit(0.5);
    let s = (a.distance(b) + b.distance(c) + c.distance(a)) * T::lit(0.5);
    T::lit(2.0) * area / s
}
