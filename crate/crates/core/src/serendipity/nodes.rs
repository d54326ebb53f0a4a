use serde::Serialize;

use crate::geometry::{Point2, Polygon};
use crate::serendipity::generators::monomial_exponents;
use crate::Real;

/// Which geometric object a node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    /// Vertex `i`, the common endpoint of edges `i` and `i + 1`.
    Vertex(usize),
    /// Node `j` (1-based, counted from the start vertex) interior to `edge`.
    Edge { edge: usize, j: usize },
    Interior(usize),
}

/// Nodal points of a serendipity element, ordered vertices, edges, interior.
#[derive(Clone, Debug)]
pub struct NodeSet<T> {
    pub points: Vec<Point2<T>>,
    pub kinds: Vec<NodeKind>,
    pub r: usize,
}

/// Vertices of the interior triangle carrying the cell nodes.
pub fn interior_triangle<T: Real>(e: &Polygon<T>) -> [Point2<T>; 3] {
    let n = e.num_vertices();
    let c = e.centroid();
    let half = T::lit(0.5);
    let mut t = [c; 3];
    for (m, slot) in t.iter_mut().enumerate() {
        let v = e.vertices()[m * n / 3];
        *slot = c + (v - c) * half;
    }
    t
}

/// Lagrange nodes of order `q` on a triangle, in the order of `monomial_exponents`.
pub fn triangle_lagrange_nodes<T: Real>(tri: &[Point2<T>; 3], q: usize) -> Vec<Point2<T>> {
    if q == 0 {
        return vec![(tri[0] + tri[1] + tri[2]) / T::lit(3.0)];
    }
    let qf = T::from_usize_lossy(q);
    monomial_exponents(q)
        .into_iter()
        .map(|(a, b)| {
            tri[0]
                + (tri[1] - tri[0]) * (T::from_usize_lossy(a) / qf)
                + (tri[2] - tri[0]) * (T::from_usize_lossy(b) / qf)
        })
        .collect()
}

impl<T: Real> NodeSet<T> {
    /// Vertex, edge and (for `r >= N`) interior nodes of index `r`.
    pub fn new(e: &Polygon<T>, r: usize) -> Self {
        let n = e.num_vertices();
        let mut points = Vec::new();
        let mut kinds = Vec::new();
        for i in 0..n {
            points.push(e.vertices()[i]);
            kinds.push(NodeKind::Vertex(i));
        }
        let rf = T::from_usize_lossy(r);
        for edge in 0..n {
            for j in 1..r {
                points.push(e.edge_point(edge, T::from_usize_lossy(j) / rf));
                kinds.push(NodeKind::Edge { edge, j });
            }
        }
        if r >= n {
            let tri = interior_triangle(e);
            for (k, p) in triangle_lagrange_nodes(&tri, r - n).into_iter().enumerate() {
                points.push(p);
                kinds.push(NodeKind::Interior(k));
            }
        }
        NodeSet { points, kinds, r }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Position of the node of the given kind.
    pub fn index_of(&self, kind: NodeKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    pub fn interior_range(&self) -> std::ops::Range<usize> {
        let start = self
            .kinds
            .iter()
            .position(|k| matches!(k, NodeKind::Interior(_)))
            .unwrap_or(self.len());
        start..self.len()
    }
}
