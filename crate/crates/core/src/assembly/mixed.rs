use rayon::prelude::*;

use crate::assembly::dofmap::{mixed_dofmap, MixedDofMap};
use crate::assembly::primal::{Field, MIN_QUAD_DEGREE};
use crate::assembly::solve::{solve, SolveReport, SolverOptions, SparseSystem, SystemKind};
use crate::error::Result;
use crate::linalg::{CsrMatrix, DenseMatrix};
use crate::mesh::Mesh;
use crate::mixed::{build_mixed_element, MixedElement, MixedScratch};
use crate::quadrature::{edge_rule, polygon_rule};
use crate::Real;

/// Quadrature degree used on a cell when none is forced.
pub fn mixed_quad_degree<T: Real>(elem: &MixedElement<T>) -> usize {
    (2 * elem.order() + 4)
        .max(2 * elem.serendipity().family().order() + 2)
        .max(MIN_QUAD_DEGREE)
}

/// Assembled mixed problem.
#[derive(Clone, Debug)]
pub struct MixedAssembly<T> {
    pub r: usize,
    pub s: usize,
    pub dofmap: MixedDofMap,
    pub elements: Vec<MixedElement<T>>,
    /// Flux mass matrix `(psi_i, psi_j)`.
    pub mass: CsrMatrix<T>,
    /// `(div psi_i, w_k)`, pressure rows by flux columns.
    pub divergence: CsrMatrix<T>,
    pub system: SparseSystem<T>,
}

struct Local<T> {
    elem: MixedElement<T>,
    m: DenseMatrix<T>,
    b: DenseMatrix<T>,
    f: Vec<T>,
    g: Vec<T>,
}

fn local_mixed<T: Real>(
    mesh: &Mesh<T>,
    c: usize,
    r: usize,
    s: usize,
    f: Field<'_, T>,
    g: Option<Field<'_, T>>,
    quad_degree: Option<usize>,
) -> Result<Local<T>> {
    let e = mesh.polygon(c);
    let elem = build_mixed_element(e, r, s).map_err(|err| err.in_cell(c))?;
    let deg = quad_degree.unwrap_or_else(|| mixed_quad_degree(&elem));
    let rule = polygon_rule(e, deg).map_err(|err| err.in_cell(c))?;
    let d = elem.dim();
    let mons = elem.monomials();
    let np = mons.len();
    let mut m = DenseMatrix::zeros(d, d);
    let mut b = DenseMatrix::zeros(np, d);
    let mut load = vec![T::zero(); np];
    let mut scratch = MixedScratch::default();
    let mut vals = Vec::new();
    let mut mv = Vec::new();
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        elem.eval_all_into(x, &mut scratch, &mut vals);
        mons.values_into(x, &mut mv);
        let fx = f(x) * w;
        for k in 0..np {
            load[k] = load[k] + fx * mv[k];
        }
        for i in 0..d {
            let vi = vals[i].0 * w;
            for j in i..d {
                m[(i, j)] = m[(i, j)] + vi.dot(vals[j].0);
            }
            let di = vals[i].1 * w;
            for k in 0..np {
                b[(k, i)] = b[(k, i)] + di * mv[k];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            m[(i, j)] = m[(j, i)];
        }
    }
    let mut gvec = vec![T::zero(); d];
    if let Some(g) = g {
        for (k, le) in mesh.cell_edges(c).iter().enumerate() {
            if !mesh.edges()[le.edge].boundary {
                continue;
            }
            let er = edge_rule(e, k, deg).map_err(|err| err.in_cell(c))?;
            let nu = e.normal(k);
            for (&x, &w) in er.points.iter().zip(&er.weights) {
                elem.eval_all_into(x, &mut scratch, &mut vals);
                let gx = g(x) * w;
                for i in 0..d {
                    gvec[i] = gvec[i] + gx * vals[i].0.dot(nu);
                }
            }
        }
    }
    Ok(Local {
        elem,
        m,
        b,
        f: load,
        g: gvec,
    })
}

/// Assembles `(u, v) - (p, div v) = -<g, v.n>`, `(div u, w) = (f, w)` as the
/// symmetric system `[[M, -B^T], [-B, 0]] [u; p] = [-G; -F]`.
pub fn assemble_mixed<T: Real>(
    mesh: &Mesh<T>,
    r: usize,
    s: usize,
    f: Field<'_, T>,
    g: Option<Field<'_, T>>,
    quad_degree: Option<usize>,
) -> Result<MixedAssembly<T>> {
    let locals: Vec<Local<T>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| local_mixed(mesh, c, r, s, f, g, quad_degree))
        .collect::<Result<_>>()?;
    let kinds: Vec<_> = locals.iter().map(|l| l.elem.kinds().to_vec()).collect();
    let dofmap = mixed_dofmap(mesh, r, s, &kinds);
    let nf = dofmap.n_flux;
    let npr = dofmap.n_pressure;
    let mut mt = Vec::new();
    let mut bt = Vec::new();
    let mut rhs = vec![T::zero(); nf + npr];
    for (c, loc) in locals.iter().enumerate() {
        let dofs = &dofmap.cell_dofs[c];
        let pr = dofmap.cell_pressure[c].clone();
        for (i, &(gi, si)) in dofs.iter().enumerate() {
            let si = T::from_i8(si).unwrap();
            rhs[gi] = rhs[gi] - si * loc.g[i];
            for (j, &(gj, sj)) in dofs.iter().enumerate() {
                mt.push((gi, gj, si * T::from_i8(sj).unwrap() * loc.m[(i, j)]));
            }
            for (k, gk) in pr.clone().enumerate() {
                bt.push((gk - nf, gi, si * loc.b[(k, i)]));
            }
        }
        for (k, gk) in pr.enumerate() {
            rhs[gk] = rhs[gk] - loc.f[k];
        }
    }
    let mut all: Vec<_> = mt.clone();
    for &(k, i, v) in &bt {
        all.push((nf + k, i, -v));
        all.push((i, nf + k, -v));
    }
    let n = nf + npr;
    Ok(MixedAssembly {
        r,
        s,
        mass: CsrMatrix::from_triplets(nf, nf, mt),
        divergence: CsrMatrix::from_triplets(npr, nf, bt),
        system: SparseSystem {
            matrix: CsrMatrix::from_triplets(n, n, all),
            rhs,
            kind: SystemKind::Saddle {
                n_flux: nf,
                n_pressure: npr,
            },
        },
        elements: locals.into_iter().map(|l| l.elem).collect(),
        dofmap,
    })
}

impl<T: Real> MixedAssembly<T> {
    /// Local flux coefficients of cell `c` (signs applied).
    pub fn local_flux(&self, c: usize, global: &[T]) -> Vec<T> {
        self.dofmap.cell_dofs[c]
            .iter()
            .map(|&(g, s)| T::from_i8(s).unwrap() * global[g])
            .collect()
    }

    /// Pressure coefficients of cell `c` over its scaled monomials.
    pub fn local_pressure(&self, c: usize, global: &[T]) -> Vec<T> {
        global[self.dofmap.cell_pressure[c].clone()].to_vec()
    }
}

/// A solved mixed problem.
#[derive(Clone, Debug)]
pub struct MixedSolution<T> {
    pub assembly: MixedAssembly<T>,
    pub coeffs: Vec<T>,
    pub report: SolveReport<T>,
}

pub fn solve_mixed<T: Real>(
    mesh: &Mesh<T>,
    r: usize,
    s: usize,
    f: Field<'_, T>,
    g: Option<Field<'_, T>>,
    quad_degree: Option<usize>,
    opts: &SolverOptions,
) -> Result<MixedSolution<T>> {
    let assembly = assemble_mixed(mesh, r, s, f, g, quad_degree)?;
    let report = solve(&assembly.system, opts)?;
    Ok(MixedSolution {
        coeffs: report.solution.clone(),
        assembly,
        report,
    })
}
