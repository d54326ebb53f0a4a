//! Polygonal meshes: topology, generators, short-edge collapse and JSON I/O.

mod collapse;
mod generators;
mod io;
mod topology;

pub use collapse::collapse_short_edges;
pub use generators::{
    gen_hex_dominant_mesh, gen_perturbed_quad_mesh, gen_square_mesh, gen_trapezoid_mesh,
    mesh_from_loops, staggered_seeds, voronoi_cell,
};
pub use io::{export_mesh, import_mesh, mesh_from_json, mesh_to_json};
pub use topology::{build_topology, mesh_stats, LocalEdge, Mesh, MeshEdge, MeshStats};
