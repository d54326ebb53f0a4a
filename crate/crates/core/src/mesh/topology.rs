use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{FemError, Result};
use crate::geometry::{validate_loop, Point2, Polygon, PolygonDefect};
use crate::Real;

/// A mesh edge; `vertices.0 < vertices.1` fixes its global direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshEdge {
    pub vertices: (usize, usize),
    /// First cell containing the edge.
    pub left: usize,
    /// The other cell, for interior edges.
    pub right: Option<usize>,
    pub boundary: bool,
}

/// Local edge `k` of a cell (from loop vertex `k - 1` to loop vertex `k`) as a
/// global edge and the sign of its direction relative to the global one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalEdge {
    pub edge: usize,
    pub sign: i8,
}

/// A conforming polygonal mesh of convex cells.
#[derive(Clone, Debug)]
pub struct Mesh<T> {
    vertices: Vec<Point2<T>>,
    cells: Vec<Vec<usize>>,
    edges: Vec<MeshEdge>,
    cell_edges: Vec<Vec<LocalEdge>>,
    polygons: Vec<Polygon<T>>,
    boundary_vertex: Vec<bool>,
}

/// Size and shape-regularity summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshStats {
    pub n_cells: usize,
    pub n_edges: usize,
    pub n_vertices: usize,
    pub h_max: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_avg: f64,
}

fn cell_error(cell: usize, d: PolygonDefect) -> FemError {
    match d {
        PolygonDefect::Clockwise => FemError::InvertedCell { cell },
        d => FemError::DegenerateCell {
            cell,
            reason: d.to_string(),
        },
    }
}

/// Builds the edge table and validates conformity.
pub fn build_topology<T: Real>(vertices: Vec<Point2<T>>, cells: Vec<Vec<usize>>) -> Result<Mesh<T>> {
    let nv = vertices.len();
    let mut polygons = Vec::with_capacity(cells.len());
    for (c, cell) in cells.iter().enumerate() {
        if let Some(&bad) = cell.iter().find(|&&v| v >= nv) {
            return Err(FemError::DegenerateCell {
                cell: c,
                reason: format!("vertex index {bad} out of range ({nv} vertices)"),
            });
        }
        let mut sorted = cell.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(FemError::DegenerateCell {
                cell: c,
                reason: format!("vertex {} repeated in the loop", w[0]),
            });
        }
        let pts: Vec<Point2<T>> = cell.iter().map(|&v| vertices[v]).collect();
        validate_loop(&pts).map_err(|d| cell_error(c, d))?;
        polygons.push(Polygon::new(pts).map_err(|e| e.in_cell(c))?);
    }

    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<MeshEdge> = Vec::new();
    let mut cell_edges = Vec::with_capacity(cells.len());
    let mut seen_dir: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, cell) in cells.iter().enumerate() {
        let n = cell.len();
        let mut local = Vec::with_capacity(n);
        for k in 0..n {
            let a = cell[(k + n - 1) % n];
            let b = cell[k];
            if let Some(&other) = seen_dir.get(&(a, b)) {
                return Err(FemError::NonconformingMesh(format!(
                    "cells {other} and {c} traverse edge ({a}, {b}) in the same direction"
                )));
            }
            seen_dir.insert((a, b), c);
            let key = (a.min(b), a.max(b));
            let sign = if a < b { 1 } else { -1 };
            let id = match index.get(&key) {
                Some(&id) => {
                    let e = &mut edges[id];
                    if e.right.is_some() {
                        return Err(FemError::NonconformingMesh(format!(
                            "edge ({}, {}) belongs to more than two cells",
                            key.0, key.1
                        )));
                    }
                    e.right = Some(c);
                    e.boundary = false;
                    id
                }
                None => {
                    edges.push(MeshEdge {
                        vertices: key,
                        left: c,
                        right: None,
                        boundary: true,
                    });
                    index.insert(key, edges.len() - 1);
                    edges.len() - 1
                }
            };
            local.push(LocalEdge { edge: id, sign });
        }
        cell_edges.push(local);
    }

    let mut boundary_vertex = vec![false; nv];
    for e in edges.iter().filter(|e| e.boundary) {
        boundary_vertex[e.vertices.0] = true;
        boundary_vertex[e.vertices.1] = true;
    }
    let used: Vec<bool> = {
        let mut u = vec![false; nv];
        cells.iter().flatten().for_each(|&v| u[v] = true);
        u
    };
    if let Some(v) = used.iter().position(|&u| !u) {
        return Err(FemError::NonconformingMesh(format!("vertex {v} belongs to no cell")));
    }

    // hanging nodes show up as boundary vertices inside boundary edges
    let h = polygons.iter().fold(T::zero(), |a, p| a.max(p.diameter()));
    let tol = h * T::lit(1e-10);
    let bverts: Vec<usize> = (0..nv).filter(|&v| boundary_vertex[v]).collect();
    for e in edges.iter().filter(|e| e.boundary) {
        let (a, b) = (vertices[e.vertices.0], vertices[e.vertices.1]);
        let d = b - a;
        let len2 = d.norm_squared();
        for &v in &bverts {
            if v == e.vertices.0 || v == e.vertices.1 {
                continue;
            }
            let p = vertices[v];
            let t = (p - a).dot(d) / len2;
            if t > T::zero() && t < T::one() && (p - a).cross(d).abs() / len2.sqrt() < tol {
                return Err(FemError::NonconformingMesh(format!(
                    "vertex {v} lies inside edge ({}, {})",
                    e.vertices.0, e.vertices.1
                )));
            }
        }
    }

    Ok(Mesh {
        vertices,
        cells,
        edges,
        cell_edges,
        polygons,
        boundary_vertex,
    })
}

impl<T: Real> Mesh<T> {
    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.boundary).count()
    }

    pub fn cell_edges(&self, c: usize) -> &[LocalEdge] {
        &self.cell_edges[c]
    }

    pub fn polygon(&self, c: usize) -> &Polygon<T> {
        &self.polygons[c]
    }

    pub fn polygons(&self) -> &[Polygon<T>] {
        &self.polygons
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn edge_length(&self, e: usize) -> T {
        let (a, b) = self.edges[e].vertices;
        self.vertices[a].distance(self.vertices[b])
    }

    /// Largest cell diameter.
    pub fn h_max(&self) -> T {
        self.polygons.iter().fold(T::zero(), |a, p| a.max(p.diameter()))
    }

    pub fn area(&self) -> T {
        self.polygons.iter().map(|p| p.area()).sum()
    }

    /// Number of cells per vertex count.
    pub fn ngon_census(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cells {
            *m.entry(c.len()).or_insert(0) += 1;
        }
        m
    }

    /// Number of cells containing each vertex.
    pub fn vertex_valence(&self) -> Vec<usize> {
        let mut v = vec![0; self.vertices.len()];
        self.cells.iter().flatten().for_each(|&i| v[i] += 1);
        v
    }

    pub fn stats(&self) -> MeshStats {
        mesh_stats(self)
    }
}

/// Aggregates the shape regularity of every cell.
pub fn mesh_stats<T: Real>(m: &Mesh<T>) -> MeshStats {
    let sig: Vec<f64> = m
        .polygons
        .iter()
        .map(|p| p.shape_regularity().sigma.to_f64_lossy())
        .collect();
    let n = sig.len().max(1) as f64;
    MeshStats {
        n_cells: m.num_cells(),
        n_edges: m.num_edges(),
        n_vertices: m.num_vertices(),
        h_max: m.h_max().to_f64_lossy(),
        sigma_min: sig.iter().copied().fold(f64::INFINITY, f64::min),
        sigma_max: sig.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        sigma_avg: sig.iter().sum::<f64>() / n,
    }
}
