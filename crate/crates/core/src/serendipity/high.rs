//! Nodal basis of the serendipity space of index `r >= N - 2`.

use std::sync::Arc;

use crate::error::Result;
use crate::geometry::{LambdaPairChoice, Point2, Polygon};
use crate::linalg::{DenseMatrix, Lu};
use crate::serendipity::generators::{monomial_exponents, Generator, GeneratorFamily};
use crate::serendipity::nodes::{NodeKind, NodeSet};
use crate::Real;

/// Condition estimate above which edge systems are reported as ill conditioned.
pub const EDGE_CONDITION_WARN: f64 = 1e12;

pub(crate) struct RowBasis<T> {
    pub family: Arc<GeneratorFamily<T>>,
    pub nodes: NodeSet<T>,
    /// Nodal basis rows in node order.
    pub rows: DenseMatrix<T>,
    /// Edge functions before the interior correction, in edge-node order.
    pub simple_edge: DenseMatrix<T>,
    /// Vertex functions normalized at their vertex, before the interior correction.
    pub simple_vertex: DenseMatrix<T>,
    pub edge_condition: f64,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn axpy<T: Real>(y: &mut [T], a: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + a * xi;
    }
}

fn prod_lambda<T: Real>(e: &Polygon<T>, x: Point2<T>, skip: &[usize]) -> T {
    e.edge_distance_functions()
        .iter()
        .enumerate()
        .filter(|(m, _)| !skip.contains(m))
        .map(|(_, l)| l.value(x))
        .fold(T::one(), |a, b| a * b)
}

pub(crate) fn build_high<T: Real>(
    e: &Polygon<T>,
    r: usize,
    choice: LambdaPairChoice,
) -> Result<RowBasis<T>> {
    let n = e.num_vertices();
    let family = Arc::new(GeneratorFamily::new(e, r, choice)?);
    let nodes = NodeSet::new(e, r);
    let g = family.len();
    let gv: Vec<Vec<T>> = nodes.points.iter().map(|&x| family.values(x)).collect();
    let interior: Vec<usize> = nodes.interior_range().collect();

    // interior cell functions: bubble times the Lagrange basis of P_{r-N}
    let mut cells: Vec<Vec<T>> = Vec::new();
    if r >= n {
        let mons = monomial_exponents(r - n);
        let pts: Vec<Point2<T>> = interior.iter().map(|&k| nodes.points[k]).collect();
        let vand = DenseMatrix::from_fn(pts.len(), mons.len(), |k, m| {
            let s = family.scaled(pts[k]);
            s.x.powi(mons[m].0 as i32) * s.y.powi(mons[m].1 as i32)
        });
        let vinv = Lu::factor(vand)?.inverse();
        for (i, &p) in pts.iter().enumerate() {
            let b = prod_lambda(e, p, &[]);
            let mut row = vec![T::zero(); g];
            for (m, &(a, bb)) in mons.iter().enumerate() {
                let gi = family.index_of(Generator::Bubble { a, b: bb }).unwrap();
                row[gi] = vinv[(m, i)] / b;
            }
            cells.push(row);
        }
    }
    let correct = |row: &mut Vec<T>| {
        let vals: Vec<T> = interior.iter().map(|&k| dot(row, &gv[k])).collect();
        for (c, v) in cells.iter().zip(vals) {
            axpy(row, -v, c);
        }
    };

    // edge functions from the square system on each edge
    let p = r + 2 - n;
    let mut edge_rows: Vec<Vec<T>> = Vec::new();
    let mut simple_edge: Vec<Vec<T>> = Vec::new();
    let mut worst = 0.0f64;
    if r >= 2 {
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let mut unknowns: Vec<usize> = (0..p)
                .map(|power| family.index_of(Generator::EdgePoly { edge: i, power }).unwrap())
                .collect();
            for k in 0..n {
                if !e.are_adjacent(i, k) {
                    unknowns.push(family.index_of(Generator::Pair { k: i, l: k }).unwrap());
                }
            }
            debug_assert_eq!(unknowns.len(), r - 1);
            let node_idx: Vec<usize> = (1..r)
                .map(|j| nodes.index_of(NodeKind::Edge { edge: i, j }).unwrap())
                .collect();
            let a = DenseMatrix::from_fn(r - 1, r - 1, |row, col| {
                gv[node_idx[row]][unknowns[col]] / denom(e, nodes.points[node_idx[row]], prev, next)
            });
            let lu = Lu::factor(a)?;
            let cond = lu.condition_estimate().to_f64_lossy();
            if cond > EDGE_CONDITION_WARN {
                log::warn!("edge {i} system has condition estimate {cond:.3e}");
            }
            worst = worst.max(cond);
            for j in 0..r - 1 {
                let mut rhs = vec![T::zero(); r - 1];
                rhs[j] = T::one() / denom(e, nodes.points[node_idx[j]], prev, next);
                let sol = lu.solve(&rhs);
                let mut row = vec![T::zero(); g];
                for (c, &gi) in unknowns.iter().enumerate() {
                    row[gi] = sol[c];
                }
                simple_edge.push(row.clone());
                correct(&mut row);
                edge_rows.push(row);
            }
        }
    }
    let edge_row = |edge: usize, j: usize| &edge_rows[edge * (r - 1) + j - 1];

    // vertex functions
    let mut vertex_rows = Vec::new();
    let mut simple_vertex = Vec::new();
    for i in 0..n {
        let gi = family.index_of(Generator::Vertex(i)).unwrap();
        let mut row = vec![T::zero(); g];
        row[gi] = T::one();
        for k in [i, (i + 1) % n] {
            for j in 1..r {
                let x = nodes.index_of(NodeKind::Edge { edge: k, j }).unwrap();
                axpy(&mut row, -gv[x][gi], edge_row(k, j));
            }
        }
        let norm = T::one() / dot(&row, &gv[i]);
        let simple: Vec<T> = row.iter().map(|&c| c * norm).collect();
        correct(&mut row);
        row.iter_mut().for_each(|c| *c = *c * norm);
        simple_vertex.push(simple);
        vertex_rows.push(row);
    }

    let all: Vec<Vec<T>> = vertex_rows.into_iter().chain(edge_rows).chain(cells).collect();
    Ok(RowBasis {
        family,
        nodes,
        rows: DenseMatrix::from_rows_sized(&all, g),
        simple_edge: DenseMatrix::from_rows_sized(&simple_edge, g),
        simple_vertex: DenseMatrix::from_rows_sized(&simple_vertex, g),
        edge_condition: worst,
    })
}

// lambda_{i-1} lambda_{i+1} at an edge node, which is positive there
fn denom<T: Real>(e: &Polygon<T>, x: Point2<T>, prev: usize, next: usize) -> T {
    e.lambda(prev).value(x) * e.lambda(next).value(x)
}
