use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{FemError, Result};
use crate::geometry::Point2;
use crate::mesh::topology::{build_topology, Mesh};
use crate::Real;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    vertices: Vec<[f64; 2]>,
    cells: Vec<Vec<usize>>,
}

/// JSON text with 17 significant digits per coordinate.
pub fn mesh_to_json<T: Real>(m: &Mesh<T>) -> String {
    let mut s = String::from("{\n  \"vertices\": [\n");
    let nv = m.num_vertices();
    for (i, v) in m.vertices().iter().enumerate() {
        let sep = if i + 1 < nv { "," } else { "" };
        let _ = writeln!(s, "    [{:.16e}, {:.16e}]{sep}", v.x.to_f64_lossy(), v.y.to_f64_lossy());
    }
    s.push_str("  ],\n  \"cells\": [\n");
    let nc = m.num_cells();
    for (c, cell) in m.cells().iter().enumerate() {
        let ids: Vec<String> = cell.iter().map(|i| i.to_string()).collect();
        let sep = if c + 1 < nc { "," } else { "" };
        let _ = writeln!(s, "    [{}]{sep}", ids.join(", "));
    }
    s.push_str("  ]\n}\n");
    s
}

/// Parses mesh JSON and validates the topology.
pub fn mesh_from_json<T: Real>(text: &str) -> Result<Mesh<T>> {
    let f: MeshFile = serde_json::from_str(text).map_err(|e| FemError::Parse(e.to_string()))?;
    let vertices = f
        .vertices
        .iter()
        .map(|&[x, y]| Point2::new(T::lit(x), T::lit(y)))
        .collect();
    build_topology(vertices, f.cells)
}

pub fn export_mesh<T: Real>(m: &Mesh<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, mesh_to_json(m))?;
    Ok(())
}

pub fn import_mesh<T: Real>(path: impl AsRef<Path>) -> Result<Mesh<T>> {
    mesh_from_json(&std::fs::read_to_string(path)?)
}
