use rayon::prelude::*;

use crate::assembly::dofmap::{primal_dofmap, PrimalDofMap};
use crate::assembly::solve::{solve, SolveReport, SolverOptions, SparseSystem, SystemKind};
use crate::error::Result;
use crate::geometry::Point2;
use crate::linalg::{CsrMatrix, DenseMatrix};
use crate::mesh::Mesh;
use crate::quadrature::polygon_rule;
use crate::serendipity::{build_ds_element, DsElement};
use crate::Real;

/// Scalar field on the plane, shared across assembly threads.
pub type Field<'a, T> = &'a (dyn Fn(Point2<T>) -> T + Sync);

/// Floor on the default quadrature degree. The supplemental functions are
/// rational; at this degree their integrals are accurate to about 1e-11.
pub const MIN_QUAD_DEGREE: usize = 16;

/// Quadrature degree used on a cell when none is forced.
pub fn primal_quad_degree<T: Real>(elem: &DsElement<T>) -> usize {
    (2 * elem.order() + 4)
        .max(2 * elem.family().order())
        .max(MIN_QUAD_DEGREE)
}

/// Assembled primal problem: full stiffness and load, and the reduced system
/// on the non-Dirichlet unknowns.
#[derive(Clone, Debug)]
pub struct PrimalAssembly<T> {
    pub r: usize,
    pub dofmap: PrimalDofMap,
    pub elements: Vec<DsElement<T>>,
    pub stiffness: CsrMatrix<T>,
    pub load: Vec<T>,
    pub system: SparseSystem<T>,
    /// Global index of each reduced unknown.
    pub free: Vec<usize>,
    /// Dirichlet values at boundary unknowns, zero elsewhere.
    pub lifting: Vec<T>,
}

struct Local<T> {
    elem: DsElement<T>,
    k: DenseMatrix<T>,
    f: Vec<T>,
}

fn local_primal<T: Real>(
    mesh: &Mesh<T>,
    c: usize,
    r: usize,
    f: Field<'_, T>,
    quad_degree: Option<usize>,
) -> Result<Local<T>> {
    let elem = build_ds_element(mesh.polygon(c), r).map_err(|e| e.in_cell(c))?;
    let deg = quad_degree.unwrap_or_else(|| primal_quad_degree(&elem));
    let rule = polygon_rule(mesh.polygon(c), deg).map_err(|e| e.in_cell(c))?;
    let d = elem.dim();
    let mut k = DenseMatrix::zeros(d, d);
    let mut load = vec![T::zero(); d];
    let mut scratch = Vec::new();
    let mut vals = Vec::new();
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        elem.eval_all_into(x, &mut scratch, &mut vals);
        let fx = f(x) * w;
        for i in 0..d {
            load[i] = load[i] + fx * vals[i].0;
            let gi = vals[i].1 * w;
            for j in i..d {
                k[(i, j)] = k[(i, j)] + gi.dot(vals[j].1);
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            k[(i, j)] = k[(j, i)];
        }
    }
    Ok(Local { elem, k, f: load })
}

/// Assembles `(grad p, grad q) = (f, q)` with `p = g` on the boundary (`g = 0`
/// when `None`), eliminating the boundary unknowns.
pub fn assemble_primal<T: Real>(
    mesh: &Mesh<T>,
    r: usize,
    f: Field<'_, T>,
    g: Option<Field<'_, T>>,
    quad_degree: Option<usize>,
) -> Result<PrimalAssembly<T>> {
    let dofmap = primal_dofmap(mesh, r);
    let locals: Vec<Local<T>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| local_primal(mesh, c, r, f, quad_degree))
        .collect::<Result<_>>()?;
    let n = dofmap.n_dofs;
    let mut trip = Vec::new();
    let mut load = vec![T::zero(); n];
    let mut lifting = vec![T::zero(); n];
    for (c, loc) in locals.iter().enumerate() {
        let dofs = &dofmap.cell_dofs[c];
        for (i, &gi) in dofs.iter().enumerate() {
            load[gi] = load[gi] + loc.f[i];
            for (j, &gj) in dofs.iter().enumerate() {
                trip.push((gi, gj, loc.k[(i, j)]));
            }
            if dofmap.boundary[gi] {
                if let Some(g) = g {
                    lifting[gi] = g(loc.elem.nodes().points[i]);
                }
            }
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, n, trip);
    let free: Vec<usize> = (0..n).filter(|&i| !dofmap.boundary[i]).collect();
    let mut reduced = vec![usize::MAX; n];
    for (k, &i) in free.iter().enumerate() {
        reduced[i] = k;
    }
    let kl = stiffness.matvec(&lifting);
    let rhs: Vec<T> = free.iter().map(|&i| load[i] - kl[i]).collect();
    let rtrip: Vec<_> = stiffness
        .triplets()
        .filter(|&(i, j, _)| reduced[i] != usize::MAX && reduced[j] != usize::MAX)
        .map(|(i, j, v)| (reduced[i], reduced[j], v))
        .collect();
    let system = SparseSystem {
        matrix: CsrMatrix::from_triplets(free.len(), free.len(), rtrip),
        rhs,
        kind: SystemKind::Spd,
    };
    Ok(PrimalAssembly {
        r,
        dofmap,
        elements: locals.into_iter().map(|l| l.elem).collect(),
        stiffness,
        load,
        system,
        free,
        lifting,
    })
}

impl<T: Real> PrimalAssembly<T> {
    /// Global coefficient vector from a reduced solution.
    pub fn expand(&self, reduced: &[T]) -> Vec<T> {
        let mut x = self.lifting.clone();
        for (&i, &v) in self.free.iter().zip(reduced) {
            x[i] = v;
        }
        x
    }

    /// Local coefficients of cell `c`.
    pub fn local(&self, c: usize, global: &[T]) -> Vec<T> {
        self.dofmap.cell_dofs[c].iter().map(|&g| global[g]).collect()
    }
}

/// A solved primal problem.
#[derive(Clone, Debug)]
pub struct PrimalSolution<T> {
    pub assembly: PrimalAssembly<T>,
    pub coeffs: Vec<T>,
    pub report: SolveReport<T>,
}

pub fn solve_primal<T: Real>(
    mesh: &Mesh<T>,
    r: usize,
    f: Field<'_, T>,
    g: Option<Field<'_, T>>,
    quad_degree: Option<usize>,
    opts: &SolverOptions,
) -> Result<PrimalSolution<T>> {
    let assembly = assemble_primal(mesh, r, f, g, quad_degree)?;
    let report = solve(&assembly.system, opts)?;
    let coeffs = assembly.expand(&report.solution);
    Ok(PrimalSolution {
        assembly,
        coeffs,
        report,
    })
}
