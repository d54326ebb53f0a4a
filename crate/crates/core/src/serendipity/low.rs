//! Serendipity spaces of index `r < N - 2`, carved out of a higher index space.

use crate::error::Result;
use crate::geometry::{LambdaPairChoice, Polygon};
use crate::linalg::DenseMatrix;
use crate::serendipity::high::{build_high, RowBasis};
use crate::serendipity::nodes::{NodeKind, NodeSet};
use crate::Real;

/// Lagrange polynomial of degree `r` on the nodes `k / r`, equal to 1 at `j / r`.
pub fn lagrange_1d<T: Real>(r: usize, j: usize, t: T) -> T {
    let rf = T::from_usize_lossy(r);
    let tj = T::from_usize_lossy(j) / rf;
    (0..=r)
        .filter(|&k| k != j)
        .map(|k| {
            let tk = T::from_usize_lossy(k) / rf;
            (t - tk) / (tj - tk)
        })
        .fold(T::one(), |a, b| a * b)
}

pub(crate) fn build_low<T: Real>(
    e: &Polygon<T>,
    r: usize,
    s: usize,
    choice: LambdaPairChoice,
) -> Result<RowBasis<T>> {
    let n = e.num_vertices();
    assert!(r < s && s < n && r >= 1);
    let hi = build_high(e, s, choice)?;
    let g = hi.family.len();
    let hi_edge = |edge: usize, k: usize| {
        let idx = hi.nodes.index_of(NodeKind::Edge { edge, j: k }).unwrap();
        hi.rows.row(idx)
    };
    let sf = T::from_usize_lossy(s);
    let at = |k: usize| T::from_usize_lossy(k) / sf;

    let mut rows: Vec<Vec<T>> = Vec::new();
    for i in 0..n {
        let mut row = hi.rows.row(i).to_vec();
        for j in 1..s {
            let a = lagrange_1d(r, r, at(j));
            let b = lagrange_1d(r, 0, at(j));
            for (c, (&u, &v)) in row.iter_mut().zip(hi_edge(i, j).iter().zip(hi_edge((i + 1) % n, j))) {
                *c = *c + a * u + b * v;
            }
        }
        rows.push(row);
    }
    for i in 0..n {
        for j in 1..r {
            let mut row = vec![T::zero(); g];
            for k in 1..s {
                let w = lagrange_1d(r, j, at(k));
                for (c, &u) in row.iter_mut().zip(hi_edge(i, k)) {
                    *c = *c + w * u;
                }
            }
            rows.push(row);
        }
    }
    let rows = DenseMatrix::from_rows_sized(&rows, g);
    let nv = n;
    Ok(RowBasis {
        family: hi.family,
        nodes: NodeSet::new(e, r),
        simple_vertex: DenseMatrix::from_fn(nv, g, |i, k| rows[(i, k)]),
        simple_edge: DenseMatrix::from_fn(rows.rows() - nv, g, |i, k| rows[(i + nv, k)]),
        rows,
        edge_condition: hi.edge_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_is_kronecker_on_its_nodes() {
        for r in 1..6 {
            for j in 0..=r {
                for k in 0..=r {
                    let v: f64 = lagrange_1d(r, j, k as f64 / r as f64);
                    assert!((v - if j == k { 1.0 } else { 0.0 }).abs() < 1e-13);
                }
            }
        }
    }
}
