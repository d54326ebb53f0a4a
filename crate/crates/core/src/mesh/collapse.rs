use std::collections::HashSet;

use crate::error::{FemError, Result};
use crate::geometry::{validate_loop, Point2};
use crate::mesh::topology::{build_topology, Mesh};
use crate::Real;

/// Boundary vertices where the boundary turns.
fn corners<T: Real>(m: &Mesh<T>) -> Vec<bool> {
    let nv = m.num_vertices();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for e in m.edges().iter().filter(|e| e.boundary) {
        nbrs[e.vertices.0].push(e.vertices.1);
        nbrs[e.vertices.1].push(e.vertices.0);
    }
    let v = m.vertices();
    (0..nv)
        .map(|i| {
            if nbrs[i].len() != 2 {
                return nbrs[i].len() > 2;
            }
            let a = (v[nbrs[i][0]] - v[i]) / v[nbrs[i][0]].distance(v[i]);
            let b = (v[nbrs[i][1]] - v[i]) / v[nbrs[i][1]].distance(v[i]);
            a.cross(b).abs() > T::lit(1e-10)
        })
        .collect()
}

/// Removes one endpoint of every edge shorter than `rel_tol * h_max`.
///
/// The surviving endpoint is the domain corner, else the boundary vertex, else the
/// vertex in more cells, else the lower index. Edges whose collapse would move the
/// domain boundary are left alone. Repeats until no short edge remains.
pub fn collapse_short_edges<T: Real>(m: &Mesh<T>, rel_tol: f64) -> Result<Mesh<T>> {
    if !(rel_tol > 0.0) {
        return Err(FemError::InvalidArgument(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let mut mesh = m.clone();
    let mut skip: HashSet<[u64; 4]> = HashSet::new();
    let bits = |p: Point2<T>, q: Point2<T>| {
        [p.x, p.y, q.x, q.y].map(|c| c.to_f64_lossy().to_bits())
    };
    loop {
        let tol = mesh.h_max() * T::lit(rel_tol);
        let corner = corners(&mesh);
        let valence = mesh.vertex_valence();
        let v = mesh.vertices();
        let mut best: Option<(T, usize)> = None;
        for (k, e) in mesh.edges().iter().enumerate() {
            let len = mesh.edge_length(k);
            let key = bits(v[e.vertices.0], v[e.vertices.1]);
            if len < tol && !skip.contains(&key) && best.is_none_or(|(l, _)| len < l) {
                best = Some((len, k));
            }
        }
        let Some((_, k)) = best else {
            return Ok(mesh);
        };
        let e = mesh.edges()[k].clone();
        let (a, b) = e.vertices;
        let priority = |i: usize| {
            (
                corner[i],
                mesh.is_boundary_vertex(i),
                valence[i],
                std::cmp::Reverse(i),
            )
        };
        let (keep, gone) = if priority(a) >= priority(b) { (a, b) } else { (b, a) };
        if corner[gone] || (mesh.is_boundary_vertex(gone) && !e.boundary) {
            log::warn!("short edge ({a}, {b}) left in place: collapsing it would move the boundary");
            skip.insert(bits(v[a], v[b]));
            continue;
        }
        let renum = |i: usize| {
            let i = if i == gone { keep } else { i };
            if i > gone {
                i - 1
            } else {
                i
            }
        };
        let mut vertices = mesh.vertices().to_vec();
        vertices.remove(gone);
        let mut cells = Vec::with_capacity(mesh.num_cells());
        for (c, cell) in mesh.cells().iter().enumerate() {
            let mut new: Vec<usize> = cell.iter().map(|&i| renum(i)).collect();
            new.dedup();
            while new.len() > 1 && new.first() == new.last() {
                new.pop();
            }
            let pts: Vec<Point2<T>> = new.iter().map(|&i| vertices[i]).collect();
            if validate_loop(&pts).is_err() {
                return Err(FemError::CollapseBreaksConvexity { cell: c });
            }
            cells.push(new);
        }
        mesh = build_topology(vertices, cells)?;
    }
}
