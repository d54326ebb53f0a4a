//! Explicit supplemental space for `r < N - 2`.
//!
//! The `N r` nodes are split into a set `A_P` of `dim P_r` nodes, selected edge by
//! edge, and the rest `A_S`. The nodal functions of `A_S` span the supplement;
//! the nodal functions of `A_P` are completed from products of affine functions.

use crate::error::{FemError, Result};
use crate::geometry::{signed_distance_line, AffineScalar, Point2, Polygon};
use crate::serendipity::element::{build_low_order_with, DsElement};
use crate::serendipity::fns::ScalarBasisFn;
use crate::serendipity::nodes::NodeKind;
use crate::Real;

/// Result of the explicit supplement construction.
#[derive(Clone, Debug)]
pub struct LowOrderSupplement<T> {
    pub element: DsElement<T>,
    /// Selected node indices of `A_P`, grouped by step `k = 1, ..., r + 1`.
    pub groups: Vec<Vec<usize>>,
    /// Edge chosen at step `k`, in the same order as `groups`.
    pub group_edges: Vec<usize>,
    /// Node indices of `A_S`.
    pub a_s: Vec<usize>,
    /// Supplemental functions, one per node of `A_S`.
    pub supplemental: Vec<ScalarBasisFn<T>>,
    /// Nodal functions of the `A_P` nodes, flattened in group order.
    pub completions: Vec<ScalarBasisFn<T>>,
}

impl<T: Real> LowOrderSupplement<T> {
    pub fn a_p(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    /// All nodal functions paired with their node index.
    pub fn nodal_basis(&self) -> Vec<(usize, ScalarBasisFn<T>)> {
        self.a_p()
            .into_iter()
            .zip(self.completions.iter().cloned())
            .chain(self.a_s.iter().copied().zip(self.supplemental.iter().cloned()))
            .collect()
    }
}

/// Node of edge `i` at position `j in 0..=r`, endpoints included.
fn edge_position(n: usize, r: usize, i: usize, j: usize) -> NodeKind {
    if j == 0 {
        NodeKind::Vertex((i + n - 1) % n)
    } else if j == r {
        NodeKind::Vertex(i)
    } else {
        NodeKind::Edge { edge: i, j }
    }
}

fn vertex_on_edge(n: usize, v: usize, edge: usize) -> bool {
    v == edge || v == (edge + n - 1) % n
}

/// Greedy selection of `A_P`: steps `k = r + 1, ..., 1` use edge `k - 1`, taking
/// interior edge nodes first and then endpoints not on an edge already chosen.
pub(crate) fn select_nodes(n: usize, r: usize) -> Result<Vec<(usize, Vec<NodeKind>)>> {
    let mut chosen_edges: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    for k in (1..=r + 1).rev() {
        let edge = k - 1;
        let mut picks: Vec<NodeKind> = (1..=k.min(r.saturating_sub(1)))
            .map(|j| NodeKind::Edge { edge, j })
            .collect();
        for j in [0, r] {
            if picks.len() == k {
                break;
            }
            if let NodeKind::Vertex(v) = edge_position(n, r, edge, j) {
                if !chosen_edges.iter().any(|&m| vertex_on_edge(n, v, m)) {
                    picks.push(NodeKind::Vertex(v));
                }
            }
        }
        if picks.len() != k {
            return Err(FemError::SelectionInfeasible(format!(
                "step {k} found {} admissible nodes on edge {edge}",
                picks.len()
            )));
        }
        chosen_edges.push(edge);
        steps.push((edge, picks));
    }
    steps.reverse();
    Ok(steps)
}

/// Builds the node partition, the supplemental functions and the polynomial
/// completion of the nodal basis for `1 <= r < N - 2` inside index `s`.
pub fn build_low_order_supplement<T: Real>(
    e: &Polygon<T>,
    r: usize,
    s: usize,
) -> Result<LowOrderSupplement<T>> {
    let n = e.num_vertices();
    if !(r >= 1 && r + 2 < n) {
        return Err(FemError::InvalidArgument(format!(
            "explicit supplement needs 1 <= r < N - 2, got r = {r}, N = {n}"
        )));
    }
    let element = build_low_order_with(e, r, s)?;
    let nodes = element.nodes();
    let steps = select_nodes(n, r)?;
    let groups: Vec<Vec<usize>> = steps
        .iter()
        .map(|(_, ks)| ks.iter().map(|&k| nodes.index_of(k).unwrap()).collect())
        .collect();
    let group_edges: Vec<usize> = steps.iter().map(|(edge, _)| *edge).collect();
    let in_p: Vec<usize> = groups.iter().flatten().copied().collect();
    let a_s: Vec<usize> = (0..nodes.len()).filter(|k| !in_p.contains(k)).collect();
    let supplemental: Vec<ScalarBasisFn<T>> = a_s.iter().map(|&k| element.basis(k)).collect();

    let g = element.family().len();
    let rows = element.coefficients();
    let pt = |k: usize| nodes.points[k];
    let y11 = pt(groups[0][0]);
    // products of affine functions, one per node of A_P
    let mut products: Vec<Vec<AffineScalar<T>>> = Vec::new();
    for (k, group) in groups.iter().enumerate() {
        for (l, &node) in group.iter().enumerate() {
            let y = pt(node);
            let mut f = Vec::new();
            for (m, &other) in group.iter().enumerate() {
                if m != l {
                    f.push(normalized(signed_distance_line(y11, pt(other))?, y)?);
                }
            }
            for &edge in &group_edges[k + 1..] {
                f.push(normalized(*e.lambda(edge), y)?);
            }
            products.push(f);
        }
    }
    let eval_prod = |f: &[AffineScalar<T>], x: Point2<T>| {
        f.iter().map(|a| a.value(x)).fold(T::one(), |u, v| u * v)
    };

    // completion = sum_a poly[a] * products[a] + generator row
    let mut poly: Vec<Vec<T>> = Vec::new();
    let mut grow: Vec<Vec<T>> = Vec::new();
    let mut flat = 0usize;
    for group in &groups {
        let start = flat;
        for _ in group {
            let f = &products[flat];
            let mut p = vec![T::zero(); in_p.len()];
            p[flat] = T::one();
            let mut row = vec![T::zero(); g];
            for &x in &a_s {
                let c = eval_prod(f, pt(x));
                for (u, &v) in row.iter_mut().zip(rows.row(x)) {
                    *u = *u - c * v;
                }
            }
            for prev in 0..start {
                let c = eval_prod(f, pt(in_p[prev]));
                for (u, &v) in p.iter_mut().zip(&poly[prev]) {
                    *u = *u - c * v;
                }
                for (u, &v) in row.iter_mut().zip(&grow[prev]) {
                    *u = *u - c * v;
                }
            }
            poly.push(p);
            grow.push(row);
            flat += 1;
        }
    }
    let completions = poly
        .into_iter()
        .zip(grow)
        .map(|(p, row)| {
            let mut terms: Vec<(T, ScalarBasisFn<T>)> = p
                .iter()
                .zip(&products)
                .filter(|(&w, _)| w != T::zero())
                .map(|(&w, f)| {
                    let fs = f.iter().map(|&a| ScalarBasisFn::Affine(a)).collect();
                    (w, ScalarBasisFn::product(fs))
                })
                .collect();
            terms.push((
                T::one(),
                ScalarBasisFn::Generated {
                    family: element.family().clone(),
                    coeffs: row,
                },
            ));
            ScalarBasisFn::Combination(terms)
        })
        .collect();
    Ok(LowOrderSupplement {
        element,
        groups,
        group_edges,
        a_s,
        supplemental,
        completions,
    })
}

// scale an affine function to equal 1 at `y`
fn normalized<T: Real>(a: AffineScalar<T>, y: Point2<T>) -> Result<AffineScalar<T>> {
    let v = a.value(y);
    if v == T::zero() || !v.is_finite() {
        return Err(FemError::SelectionInfeasible("selected node lies on a zero line".into()));
    }
    Ok(a.scaled(T::one() / v))
}
