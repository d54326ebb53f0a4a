use std::sync::Arc;

use serde::Serialize;

use crate::error::{FemError, Result};
use crate::geometry::{Point2, Polygon, Vector2};
use crate::linalg::DenseMatrix;
use crate::mixed::vector_fn::{curl_vec, ScaledMonomials, ValueDiv, VectorBasisFn};
use crate::quadrature::gauss_legendre_unit;
use crate::serendipity::{
    build_ds_element, monomial_exponents, DsElement, GeneratorFamily, ValueGrad,
};
use crate::Real;

/// Number of degrees of freedom of the mixed space `V_r^s` on an `N`-gon.
pub fn mixed_dimension(n: usize, r: usize, s: usize) -> usize {
    assert!(n >= 3 && s <= r && s + 1 >= r);
    let bubbles = if r + 1 >= n {
        (r + 3 - n) * (r + 2 - n) / 2
    } else {
        0
    };
    n * (r + 1) - 1 + (s + 2) * (s + 1) / 2 + bubbles
}

/// Role of a mixed basis function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MixedKind {
    /// Unit total outward flux through `edge`, no flux elsewhere.
    EdgeFlux(usize),
    /// Zero-mean flux through `edge`; `j` is 1-based from the start vertex.
    EdgeMoment { edge: usize, j: usize },
    /// Removes the flux of `(x - c) p_k` for the `k`-th nonconstant monomial.
    Divergence(usize),
    /// Curl of the `k`-th interior cell function.
    Bubble(usize),
}

/// Scratch buffers for repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct MixedScratch<T> {
    gens: Vec<ValueGrad<T>>,
    mons: Vec<T>,
}

/// The direct mixed element `V_r^s` built from the serendipity space of index `r + 1`.
#[derive(Clone, Debug)]
pub struct MixedElement<T> {
    polygon: Polygon<T>,
    r: usize,
    s: usize,
    ds: DsElement<T>,
    monomials: Arc<ScaledMonomials<T>>,
    curl: DenseMatrix<T>,
    xpoly: DenseMatrix<T>,
    constant: Vec<Vector2<T>>,
    kinds: Vec<MixedKind>,
    flux_constants: DenseMatrix<T>,
}

fn axpy<T: Real>(y: &mut [T], a: T, x: &[T]) {
    for (u, &v) in y.iter_mut().zip(x) {
        *u = *u + a * v;
    }
}

/// Builds `V_r^s` on a convex polygon, `s` being `r - 1` or `r`.
pub fn build_mixed_element<T: Real>(e: &Polygon<T>, r: usize, s: usize) -> Result<MixedElement<T>> {
    if s > r || s + 1 < r {
        return Err(FemError::InvalidArgument(format!(
            "divergence degree must be r - 1 or r, got r = {r}, s = {s}"
        )));
    }
    let n = e.num_vertices();
    let ds = build_ds_element(e, r + 1)?;
    let family: &Arc<GeneratorFamily<T>> = ds.family();
    let nf = family.len();
    let monomials = Arc::new(ScaledMonomials::new(
        family.center(),
        family.scale(),
        monomial_exponents(s),
    ));
    let nm = monomials.len();
    let se = ds.simple_edge_rows();
    let sv = ds.simple_vertex_rows();
    let rp1 = T::from_usize_lossy(r + 1);
    let edge_row = |i: usize, j: usize| se.row(i * r + j - 1);

    // vertex functions with linear traces
    let star: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = sv.row(i).to_vec();
            for j in 1..=r {
                let t = T::from_usize_lossy(j) / rp1;
                axpy(&mut row, t, edge_row(i, j));
                axpy(&mut row, T::one() - t, edge_row((i + 1) % n, j));
            }
            row
        })
        .collect();

    let mut flux_constants = DenseMatrix::zeros(n, n);
    let mut curl_rows: Vec<Vec<T>> = Vec::new();
    let mut xrows: Vec<Vec<T>> = Vec::new();
    let mut consts: Vec<Vector2<T>> = Vec::new();
    let mut kinds = Vec::new();
    let center = monomials.center;

    for i in 0..n {
        let anchor = e.vertices()[(i + 1) % n];
        let mut c = vec![T::zero(); n];
        let mut prev = T::zero();
        for jj in i + 3..=i + n {
            let j = jj % n;
            let a = (e.vertices()[j] - anchor).dot(e.normal(j));
            prev = a + e.edge_length((j + n - 1) % n) / e.edge_length(j) * prev;
            if !(prev > T::zero()) {
                return Err(FemError::InvalidPolygon(format!(
                    "flux recursion constant c({i},{j}) = {prev:e} is not positive"
                )));
            }
            c[j] = prev;
        }
        flux_constants.row_mut(i).copy_from_slice(&c);
        let scale = T::one() / (c[i] * e.edge_length(i));
        let mut curl = vec![T::zero(); nf];
        for jj in i + 3..i + n {
            let j = jj % n;
            axpy(&mut curl, -c[j] * e.edge_length(j) * scale, &star[j]);
        }
        let mut xp = vec![T::zero(); nm];
        xp[0] = scale;
        curl_rows.push(curl);
        xrows.push(xp);
        consts.push((center - anchor) * scale);
        kinds.push(MixedKind::EdgeFlux(i));
    }
    for i in 0..n {
        for j in 1..=r {
            curl_rows.push(edge_row(i, j).to_vec());
            xrows.push(vec![T::zero(); nm]);
            consts.push(Vector2::zero());
            kinds.push(MixedKind::EdgeMoment { edge: i, j });
        }
    }

    // (x - c) p minus the edge functions carrying its flux
    if s >= 1 {
        let (gt, gw) = gauss_legendre_unit::<T>(s)?;
        for m in 1..nm {
            let mut curl = vec![T::zero(); nf];
            let mut xp = vec![T::zero(); nm];
            let mut cst = Vector2::zero();
            xp[m] = T::one();
            for j in 0..n {
                let cj = (e.vertices()[j] - center).dot(e.normal(j));
                let len = e.edge_length(j);
                let antider = |t: T| -> T {
                    gt.iter()
                        .zip(&gw)
                        .map(|(&u, &w)| w * t * monomials.eval(m, e.edge_point(j, u * t)).0)
                        .sum()
                };
                let a0 = len * cj * antider(T::one());
                axpy(&mut curl, -a0, &curl_rows[j]);
                axpy(&mut xp, -a0, &xrows[j]);
                cst = cst - consts[j] * a0;
                for l in 1..=r {
                    let t = T::from_usize_lossy(l) / rp1;
                    let al = len * cj * antider(t) - a0 * t;
                    axpy(&mut curl, -al, edge_row(j, l));
                }
            }
            curl_rows.push(curl);
            xrows.push(xp);
            consts.push(cst);
            kinds.push(MixedKind::Divergence(m - 1));
        }
    }

    for (k, idx) in ds.nodes().interior_range().enumerate() {
        curl_rows.push(ds.coefficients().row(idx).to_vec());
        xrows.push(vec![T::zero(); nm]);
        consts.push(Vector2::zero());
        kinds.push(MixedKind::Bubble(k));
    }
    debug_assert_eq!(kinds.len(), mixed_dimension(n, r, s));

    Ok(MixedElement {
        polygon: e.clone(),
        r,
        s,
        curl: DenseMatrix::from_rows_sized(&curl_rows, nf),
        xpoly: DenseMatrix::from_rows_sized(&xrows, nm),
        constant: consts,
        kinds,
        flux_constants,
        monomials,
        ds,
    })
}

impl<T: Real> MixedElement<T> {
    pub fn polygon(&self) -> &Polygon<T> {
        &self.polygon
    }

    pub fn order(&self) -> usize {
        self.r
    }

    /// Degree of the divergence space.
    pub fn div_order(&self) -> usize {
        self.s
    }

    /// The underlying serendipity element of index `r + 1`.
    pub fn serendipity(&self) -> &DsElement<T> {
        &self.ds
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[MixedKind] {
        &self.kinds
    }

    pub fn index_of(&self, kind: MixedKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// Scaled monomials of degree `0..=s` about the centroid; also a basis of the
    /// divergence space.
    pub fn monomials(&self) -> &ScaledMonomials<T> {
        &self.monomials
    }

    /// `c[i][j]` of the flux recursion for edge `i` (zero where undefined).
    pub fn flux_constants(&self) -> &DenseMatrix<T> {
        &self.flux_constants
    }

    pub fn basis(&self, i: usize) -> VectorBasisFn<T> {
        VectorBasisFn::Generated {
            family: self.ds.family().clone(),
            monomials: self.monomials.clone(),
            curl: self.curl.row(i).to_vec(),
            xpoly: self.xpoly.row(i).to_vec(),
            constant: self.constant[i],
        }
    }

    pub fn eval_all_into(&self, x: Point2<T>, scratch: &mut MixedScratch<T>, out: &mut Vec<ValueDiv<T>>) {
        self.ds.family().eval_into(x, &mut scratch.gens);
        self.monomials.values_into(x, &mut scratch.mons);
        let d = x - self.monomials.center;
        out.clear();
        for i in 0..self.dim() {
            let mut g = Vector2::zero();
            for (&c, (_, gg)) in self.curl.row(i).iter().zip(&scratch.gens) {
                if c != T::zero() {
                    g = g + *gg * c;
                }
            }
            let mut p = T::zero();
            let mut div = T::zero();
            for (m, (&c, &mv)) in self.xpoly.row(i).iter().zip(&scratch.mons).enumerate() {
                if c != T::zero() {
                    p = p + c * mv;
                    div = div + c * mv * T::from_usize_lossy(2 + self.monomials.degree(m));
                }
            }
            out.push((curl_vec(g) + d * p + self.constant[i], div));
        }
    }

    pub fn eval_all(&self, x: Point2<T>) -> Vec<ValueDiv<T>> {
        let mut out = Vec::new();
        self.eval_all_into(x, &mut MixedScratch::default(), &mut out);
        out
    }

    /// Value and divergence of the field with the given coefficients.
    pub fn evaluate(&self, coeffs: &[T], x: Point2<T>) -> ValueDiv<T> {
        self.eval_all(x)
            .into_iter()
            .zip(coeffs)
            .fold((Vector2::zero(), T::zero()), |(v, d), ((bv, bd), &c)| {
                (v + bv * c, d + bd * c)
            })
    }
}
