use std::ops::Range;

use crate::mesh::Mesh;
use crate::mixed::{mixed_dimension, MixedKind};
use crate::serendipity::{NodeKind, NodeSet};
use crate::Real;

/// Global numbering of the serendipity nodes: vertices, then edge nodes ordered
/// along each edge's global direction, then cell nodes.
#[derive(Clone, Debug)]
pub struct PrimalDofMap {
    pub r: usize,
    pub n_dofs: usize,
    pub n_vertex_dofs: usize,
    pub n_edge_dofs: usize,
    pub n_cell_dofs: usize,
    /// Global index of each local node, in element node order.
    pub cell_dofs: Vec<Vec<usize>>,
    pub boundary: Vec<bool>,
}

pub fn primal_dofmap<T: Real>(mesh: &Mesh<T>, r: usize) -> PrimalDofMap {
    assert!(r >= 1);
    let nv = mesh.num_vertices();
    let per_edge = r - 1;
    let edge_base = nv;
    let cell_base = nv + mesh.num_edges() * per_edge;
    let mut next_cell = cell_base;
    let mut boundary = vec![false; cell_base];
    for v in 0..nv {
        boundary[v] = mesh.is_boundary_vertex(v);
    }
    for (g, e) in mesh.edges().iter().enumerate() {
        for j in 0..per_edge {
            boundary[edge_base + g * per_edge + j] = e.boundary;
        }
    }
    let mut cell_dofs = Vec::with_capacity(mesh.num_cells());
    for c in 0..mesh.num_cells() {
        let nodes = NodeSet::new(mesh.polygon(c), r);
        let cell = &mesh.cells()[c];
        let dofs = nodes
            .kinds
            .iter()
            .map(|&k| match k {
                NodeKind::Vertex(i) => cell[i],
                NodeKind::Edge { edge, j } => {
                    let le = mesh.cell_edges(c)[edge];
                    let pos = if le.sign > 0 { j - 1 } else { r - 1 - j };
                    edge_base + le.edge * per_edge + pos
                }
                NodeKind::Interior(_) => {
                    next_cell += 1;
                    next_cell - 1
                }
            })
            .collect();
        cell_dofs.push(dofs);
    }
    boundary.resize(next_cell, false);
    PrimalDofMap {
        r,
        n_dofs: next_cell,
        n_vertex_dofs: nv,
        n_edge_dofs: cell_base - nv,
        n_cell_dofs: next_cell - cell_base,
        cell_dofs,
        boundary,
    }
}

/// Global numbering of the mixed unknowns: `r + 1` flux functions per edge, the
/// interior (divergence and bubble) functions per cell, then `dim P_s` pressure
/// coefficients per cell.
#[derive(Clone, Debug)]
pub struct MixedDofMap {
    pub r: usize,
    pub s: usize,
    pub n_flux: usize,
    pub n_pressure: usize,
    /// Global index and sign of each local basis function.
    pub cell_dofs: Vec<Vec<(usize, i8)>>,
    pub cell_pressure: Vec<Range<usize>>,
}

impl MixedDofMap {
    pub fn n_dofs(&self) -> usize {
        self.n_flux + self.n_pressure
    }
}

/// Local basis order must be that of `MixedElement::kinds`.
pub fn mixed_dofmap<T: Real>(mesh: &Mesh<T>, r: usize, s: usize, kinds: &[Vec<MixedKind>]) -> MixedDofMap {
    let per_edge = r + 1;
    let mut next = mesh.num_edges() * per_edge;
    let np = (s + 1) * (s + 2) / 2;
    let mut cell_dofs = Vec::with_capacity(mesh.num_cells());
    for c in 0..mesh.num_cells() {
        let n = mesh.cells()[c].len();
        debug_assert_eq!(kinds[c].len(), mixed_dimension(n, r, s));
        let dofs = kinds[c]
            .iter()
            .map(|&k| match k {
                MixedKind::EdgeFlux(edge) => {
                    let le = mesh.cell_edges(c)[edge];
                    (le.edge * per_edge, le.sign)
                }
                MixedKind::EdgeMoment { edge, j } => {
                    let le = mesh.cell_edges(c)[edge];
                    let pos = if le.sign > 0 { j } else { r + 1 - j };
                    (le.edge * per_edge + pos, 1)
                }
                MixedKind::Divergence(_) | MixedKind::Bubble(_) => {
                    next += 1;
                    (next - 1, 1)
                }
            })
            .collect();
        cell_dofs.push(dofs);
    }
    let n_flux = next;
    let cell_pressure = (0..mesh.num_cells())
        .map(|c| n_flux + c * np..n_flux + (c + 1) * np)
        .collect();
    MixedDofMap {
        r,
        s,
        n_flux,
        n_pressure: np * mesh.num_cells(),
        cell_dofs,
        cell_pressure,
    }
}
