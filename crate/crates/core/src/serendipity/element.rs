use std::sync::Arc;

use crate::error::{FemError, Result};
use crate::geometry::{LambdaPairChoice, Point2, Polygon};
use crate::linalg::DenseMatrix;
use crate::serendipity::fns::ScalarBasisFn;
use crate::serendipity::generators::{combine, GeneratorFamily, ValueGrad};
use crate::serendipity::high::{build_high, RowBasis};
use crate::serendipity::low::build_low;
use crate::serendipity::nodes::{NodeKind, NodeSet};
use crate::Real;

/// Number of degrees of freedom of the serendipity space of index `r` on an `N`-gon.
pub fn ds_dimension(n: usize, r: usize) -> usize {
    assert!(n >= 3 && r >= 1);
    if r + 2 >= n {
        n + n * (r - 1) + (r + 2 - n) * (r + 1).saturating_sub(n) / 2
    } else {
        n * r
    }
}

/// Construction options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DsChoices {
    pub lambda_pair: LambdaPairChoice,
    /// Index of the enclosing space for `r < N - 2`; `None` means `N - 2`.
    pub background: Option<usize>,
}

/// A serendipity element: polygon, nodes and the dual nodal basis.
#[derive(Clone, Debug)]
pub struct DsElement<T> {
    polygon: Polygon<T>,
    r: usize,
    background: Option<usize>,
    choices: DsChoices,
    nodes: NodeSet<T>,
    family: Arc<GeneratorFamily<T>>,
    coeffs: DenseMatrix<T>,
    simple_edge: DenseMatrix<T>,
    simple_vertex: DenseMatrix<T>,
    edge_condition: f64,
}

/// Builds the serendipity element of index `r` with default choices.
pub fn build_ds_element<T: Real>(e: &Polygon<T>, r: usize) -> Result<DsElement<T>> {
    build_ds_element_with(e, r, DsChoices::default())
}

pub fn build_ds_element_with<T: Real>(
    e: &Polygon<T>,
    r: usize,
    choices: DsChoices,
) -> Result<DsElement<T>> {
    if r == 0 {
        return Err(FemError::InvalidArgument("serendipity index must be at least 1".into()));
    }
    let n = e.num_vertices();
    if r + 2 >= n {
        let b = build_high(e, r, choices.lambda_pair)?;
        Ok(DsElement::from_rows(e, r, None, choices, b))
    } else {
        let s = choices.background.unwrap_or(n - 2);
        build_low_order_inner(e, r, s, choices)
    }
}

/// Builds the space of index `r < N - 2` inside the space of index `N - 2`.
pub fn build_low_order<T: Real>(e: &Polygon<T>, r: usize) -> Result<DsElement<T>> {
    let n = e.num_vertices();
    build_low_order_with(e, r, n.saturating_sub(2))
}

/// Builds the functions of the index `s` space whose edge traces have degree `r`,
/// for any `r < s < N`.
pub fn build_low_order_with<T: Real>(e: &Polygon<T>, r: usize, s: usize) -> Result<DsElement<T>> {
    let choices = DsChoices {
        background: Some(s),
        ..DsChoices::default()
    };
    build_low_order_inner(e, r, s, choices)
}

fn build_low_order_inner<T: Real>(
    e: &Polygon<T>,
    r: usize,
    s: usize,
    choices: DsChoices,
) -> Result<DsElement<T>> {
    let n = e.num_vertices();
    if !(r >= 1 && r < s && s < n) {
        return Err(FemError::InvalidArgument(format!(
            "low order construction needs 1 <= r < s < N, got r = {r}, s = {s}, N = {n}"
        )));
    }
    let b = build_low(e, r, s, choices.lambda_pair)?;
    Ok(DsElement::from_rows(e, r, Some(s), choices, b))
}

impl<T: Real> DsElement<T> {
    fn from_rows(
        e: &Polygon<T>,
        r: usize,
        background: Option<usize>,
        choices: DsChoices,
        b: RowBasis<T>,
    ) -> Self {
        DsElement {
            polygon: e.clone(),
            r,
            background,
            choices,
            nodes: b.nodes,
            family: b.family,
            coeffs: b.rows,
            simple_edge: b.simple_edge,
            simple_vertex: b.simple_vertex,
            edge_condition: b.edge_condition,
        }
    }

    pub fn polygon(&self) -> &Polygon<T> {
        &self.polygon
    }

    pub fn order(&self) -> usize {
        self.r
    }

    /// Index of the enclosing space when `r < N - 2`.
    pub fn background_order(&self) -> Option<usize> {
        self.background
    }

    pub fn choices(&self) -> DsChoices {
        self.choices
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn nodes(&self) -> &NodeSet<T> {
        &self.nodes
    }

    pub fn family(&self) -> &Arc<GeneratorFamily<T>> {
        &self.family
    }

    /// Basis coefficients over the generator family, one row per node.
    pub fn coefficients(&self) -> &DenseMatrix<T> {
        &self.coeffs
    }

    /// Largest condition estimate among the edge systems.
    pub fn edge_condition(&self) -> f64 {
        self.edge_condition
    }

    pub fn num_interior(&self) -> usize {
        self.nodes.interior_range().len()
    }

    pub fn basis(&self, i: usize) -> ScalarBasisFn<T> {
        ScalarBasisFn::Generated {
            family: self.family.clone(),
            coeffs: self.coeffs.row(i).to_vec(),
        }
    }

    pub fn basis_of(&self, kind: NodeKind) -> Option<ScalarBasisFn<T>> {
        self.nodes.index_of(kind).map(|i| self.basis(i))
    }

    /// Interior cell functions.
    pub fn cell_basis(&self) -> Vec<ScalarBasisFn<T>> {
        self.nodes.interior_range().map(|i| self.basis(i)).collect()
    }

    /// Nodal function of edge node `j` (1-based) on `edge`.
    pub fn edge_basis(&self, edge: usize, j: usize) -> Option<ScalarBasisFn<T>> {
        self.basis_of(NodeKind::Edge { edge, j })
    }

    pub fn vertex_basis(&self, i: usize) -> Option<ScalarBasisFn<T>> {
        self.basis_of(NodeKind::Vertex(i))
    }

    /// Edge functions without the interior correction, in edge-node order.
    pub fn simple_edge_rows(&self) -> &DenseMatrix<T> {
        &self.simple_edge
    }

    /// Vertex functions normalized at their vertex, without the interior correction.
    pub fn simple_vertex_rows(&self) -> &DenseMatrix<T> {
        &self.simple_vertex
    }

    /// Values and gradients of every basis function at `x`.
    pub fn eval_all(&self, x: Point2<T>) -> Vec<ValueGrad<T>> {
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        self.eval_all_into(x, &mut scratch, &mut out);
        out
    }

    pub fn eval_all_into(
        &self,
        x: Point2<T>,
        scratch: &mut Vec<ValueGrad<T>>,
        out: &mut Vec<ValueGrad<T>>,
    ) {
        self.family.eval_into(x, scratch);
        out.clear();
        out.extend((0..self.dim()).map(|i| combine(self.coeffs.row(i), scratch)));
    }

    /// `[basis_i(node_j)]`, which is the identity for a nodal basis.
    pub fn duality_matrix(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.dim(), self.nodes.len());
        for (j, &x) in self.nodes.points.iter().enumerate() {
            for (i, (v, _)) in self.eval_all(x).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Nodal interpolation coefficients of `f`.
    pub fn interpolate(&self, f: impl Fn(Point2<T>) -> T) -> Vec<T> {
        self.nodes.points.iter().map(|&x| f(x)).collect()
    }

    /// Value and gradient of the function with the given coefficients.
    pub fn evaluate(&self, coeffs: &[T], x: Point2<T>) -> ValueGrad<T> {
        let gens = self.family.eval(x);
        let mut row = vec![T::zero(); self.family.len()];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != T::zero() {
                for (r, &a) in row.iter_mut().zip(self.coeffs.row(i)) {
                    *r = *r + c * a;
                }
            }
        }
        combine(&row, &gens)
    }
}

/// The supplemental functions `phi_{s,i,j}` for nonadjacent `i < j`, `r >= N - 2`.
///
/// Each is `(prod_{k != i, j} lambda_k) lambda_{i,j}^{r-N+2} R_{i,j}` with the
/// rational `R_{i,j} = (lambda_i - lambda_j) / (lambda_i + lambda_j)`.
pub fn build_supplement<T: Real>(
    e: &Polygon<T>,
    r: usize,
    choice: LambdaPairChoice,
) -> Result<Vec<ScalarBasisFn<T>>> {
    let n = e.num_vertices();
    if r + 2 < n {
        return Err(FemError::InvalidArgument(format!(
            "supplement formula needs r >= N - 2, got r = {r}, N = {n}"
        )));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if e.are_adjacent(i, j) {
                continue;
            }
            out.push(supplement_fn(e, r, i, j, choice)?);
        }
    }
    Ok(out)
}

/// One supplemental function `phi_{s,i,j}`; fails for adjacent edges.
pub fn supplement_fn<T: Real>(
    e: &Polygon<T>,
    r: usize,
    i: usize,
    j: usize,
    choice: LambdaPairChoice,
) -> Result<ScalarBasisFn<T>> {
    let n = e.num_vertices();
    if e.are_adjacent(i, j) {
        return Err(FemError::AdjacentEdges(i, j));
    }
    let lam = |k: usize| ScalarBasisFn::Affine(*e.lambda(k));
    let mut factors: Vec<ScalarBasisFn<T>> =
        (0..n).filter(|&k| k != i && k != j).map(lam).collect();
    let p = (r + 2 - n) as u32;
    if p > 0 {
        let line = e.lambda_pair_with(i, j, choice)?;
        factors.push(ScalarBasisFn::power(ScalarBasisFn::Affine(line), p));
    }
    let one = T::one();
    factors.push(ScalarBasisFn::quotient(
        ScalarBasisFn::Combination(vec![(one, lam(i)), (-one, lam(j))]),
        ScalarBasisFn::Combination(vec![(one, lam(i)), (one, lam(j))]),
    ));
    Ok(ScalarBasisFn::product(factors))
}
