use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::exact::ExactSolution;
use crate::assembly::mixed::{mixed_quad_degree, MixedAssembly};
use crate::assembly::primal::{primal_quad_degree, PrimalAssembly};
use crate::error::{FemError, Result};
use crate::mesh::Mesh;
use crate::mixed::MixedScratch;
use crate::quadrature::polygon_rule;
use crate::Real;

#[derive(Clone, Debug, Serialize)]
pub struct PrimalErrors {
    pub l2: f64,
    pub h1_semi: f64,
    /// `||p - p_h||` on each cell.
    #[serde(skip)]
    pub cell_l2: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedErrors {
    pub l2_p: f64,
    pub l2_u: f64,
    pub l2_div: f64,
    /// `||p - p_h||` on each cell.
    #[serde(skip)]
    pub cell_l2: Vec<f64>,
}

/// Errors of a primal solution against `exact`. Quadrature is two degrees above
/// the assembly rule unless forced.
pub fn primal_errors<T: Real>(
    mesh: &Mesh<T>,
    asm: &PrimalAssembly<T>,
    coeffs: &[T],
    exact: &ExactSolution<T>,
    quad_degree: Option<usize>,
) -> Result<PrimalErrors> {
    let per_cell: Vec<(f64, f64)> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let elem = &asm.elements[c];
            let deg = quad_degree.unwrap_or_else(|| primal_quad_degree(elem) + 2);
            let rule = polygon_rule(mesh.polygon(c), deg).map_err(|e| e.in_cell(c))?;
            let local = asm.local(c, coeffs);
            let (mut e0, mut e1) = (T::zero(), T::zero());
            for (&x, &w) in rule.points.iter().zip(&rule.weights) {
                let (v, g) = elem.evaluate(&local, x);
                let dv = exact.p(x) - v;
                let dg = exact.grad_p(x) - g;
                e0 = e0 + w * dv * dv;
                e1 = e1 + w * dg.dot(dg);
            }
            Ok((e0.to_f64_lossy(), e1.to_f64_lossy()))
        })
        .collect::<Result<_>>()?;
    Ok(PrimalErrors {
        l2: per_cell.iter().map(|e| e.0).sum::<f64>().sqrt(),
        h1_semi: per_cell.iter().map(|e| e.1).sum::<f64>().sqrt(),
        cell_l2: per_cell.iter().map(|e| e.0.sqrt()).collect(),
    })
}

/// Errors of a mixed solution (flux unknowns then pressures) against `exact`.
pub fn mixed_errors<T: Real>(
    mesh: &Mesh<T>,
    asm: &MixedAssembly<T>,
    coeffs: &[T],
    exact: &ExactSolution<T>,
    quad_degree: Option<usize>,
) -> Result<MixedErrors> {
    let per_cell: Vec<[f64; 3]> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let elem = &asm.elements[c];
            let deg = quad_degree.unwrap_or_else(|| mixed_quad_degree(elem) + 2);
            let rule = polygon_rule(mesh.polygon(c), deg).map_err(|e| e.in_cell(c))?;
            let flux = asm.local_flux(c, coeffs);
            let pres = asm.local_pressure(c, coeffs);
            let mons = elem.monomials();
            let mut scratch = MixedScratch::default();
            let mut vals = Vec::new();
            let mut mv = Vec::new();
            let mut acc = [T::zero(); 3];
            for (&x, &w) in rule.points.iter().zip(&rule.weights) {
                elem.eval_all_into(x, &mut scratch, &mut vals);
                mons.values_into(x, &mut mv);
                let ph: T = pres.iter().zip(&mv).map(|(&a, &b)| a * b).sum();
                let (mut uh, mut dh) = (crate::Vector2::zero(), T::zero());
                for (&a, &(v, d)) in flux.iter().zip(&vals) {
                    uh = uh + v * a;
                    dh = dh + d * a;
                }
                let dp = exact.p(x) - ph;
                let du = exact.u(x) - uh;
                let dd = exact.div_u(x) - dh;
                acc[0] = acc[0] + w * dp * dp;
                acc[1] = acc[1] + w * du.dot(du);
                acc[2] = acc[2] + w * dd * dd;
            }
            Ok(acc.map(|a| a.to_f64_lossy()))
        })
        .collect::<Result<_>>()?;
    let total = |k: usize| per_cell.iter().map(|e| e[k]).sum::<f64>().sqrt();
    Ok(MixedErrors {
        l2_p: total(0),
        l2_u: total(1),
        l2_div: total(2),
        cell_l2: per_cell.iter().map(|e| e[0].sqrt()).collect(),
    })
}

/// Observed orders `log(e_{k-1}/e_k) / log(h_{k-1}/h_k)` between consecutive levels.
pub fn convergence_rates(errors: &[f64], h: &[f64]) -> Result<Vec<f64>> {
    if errors.len() != h.len() {
        return Err(FemError::InvalidArgument(format!(
            "{} errors but {} mesh sizes",
            errors.len(),
            h.len()
        )));
    }
    Ok(errors
        .windows(2)
        .zip(h.windows(2))
        .map(|(e, h)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect())
}

#[derive(Serialize)]
struct CellErrorRow {
    cell_id: usize,
    centroid_x: f64,
    centroid_y: f64,
    #[serde(rename = "L2_error")]
    l2_error: f64,
}

/// Writes one row per cell: id, centroid and L2 error.
pub fn write_cell_errors<T: Real, W: std::io::Write>(
    mesh: &Mesh<T>,
    cell_l2: &[f64],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (c, &e) in cell_l2.iter().enumerate() {
        let x = mesh.polygon(c).centroid();
        w.serialize(CellErrorRow {
            cell_id: c,
            centroid_x: x.x.to_f64_lossy(),
            centroid_y: x.y.to_f64_lossy(),
            l2_error: e,
        })
        .map_err(|e| FemError::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cell_errors_csv<T: Real>(mesh: &Mesh<T>, cell_l2: &[f64], path: &Path) -> Result<()> {
    write_cell_errors(mesh, cell_l2, std::fs::File::create(path)?)
}
