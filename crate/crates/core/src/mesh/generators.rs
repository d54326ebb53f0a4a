use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FemError, Result};
use crate::geometry::{validate_loop, Point2, Polygon};
use crate::mesh::topology::{build_topology, Mesh};
use crate::Real;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(FemError::InvalidArgument(format!("mesh size n must be at least 2, got {n}")));
    }
    Ok(())
}

fn lattice_cells(n: usize) -> Vec<Vec<usize>> {
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    cells
}

fn lattice_vertices<T: Real>(n: usize, mut f: impl FnMut(usize, usize) -> Point2<T>) -> Vec<Point2<T>> {
    let mut v = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            v.push(f(i, j));
        }
    }
    v
}

fn grid<T: Real>(n: usize, k: usize) -> T {
    if k == n {
        T::one()
    } else {
        T::from_usize_lossy(k) / T::from_usize_lossy(n)
    }
}

/// `n x n` squares on the unit square.
pub fn gen_square_mesh<T: Real>(n: usize) -> Result<Mesh<T>> {
    check_n(n)?;
    let v = lattice_vertices(n, |i, j| Point2::new(grid(n, i), grid(n, j)));
    build_topology(v, lattice_cells(n))
}

/// Square lattice whose odd interior horizontal lines zigzag by a quarter of the
/// spacing, giving trapezoids with vertical parallel sides. For even `n` all
/// cells are congruent.
pub fn gen_trapezoid_mesh<T: Real>(n: usize) -> Result<Mesh<T>> {
    check_n(n)?;
    let h = T::one() / T::from_usize_lossy(n);
    let q = h * T::lit(0.25);
    let v = lattice_vertices(n, |i, j| {
        let mut y = grid::<T>(n, j);
        if j % 2 == 1 && j < n {
            y = if i % 2 == 0 { y + q } else { y - q };
        }
        Point2::new(grid(n, i), y)
    });
    build_topology(v, lattice_cells(n))
}

/// Square lattice with interior vertices moved uniformly at random by up to
/// `noise` times the spacing in each coordinate. A draw that would make an
/// adjacent cell non-convex is redrawn; after 100 failures the vertex stays put.
pub fn gen_perturbed_quad_mesh<T: Real>(n: usize, noise: f64, seed: u64) -> Result<Mesh<T>> {
    check_n(n)?;
    if !(0.0..0.5).contains(&noise) {
        return Err(FemError::InvalidArgument(format!("noise must lie in [0, 0.5), got {noise}")));
    }
    let mut v = lattice_vertices(n, |i, j| Point2::new(grid(n, i), grid(n, j)));
    let cells = lattice_cells(n);
    if noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amp = noise / n as f64;
        for j in 1..n {
            for i in 1..n {
                let id = j * (n + 1) + i;
                let orig = v[id];
                let adjacent = [(i - 1, j - 1), (i, j - 1), (i - 1, j), (i, j)];
                for _ in 0..100 {
                    let dx: f64 = rng.gen_range(-amp..=amp);
                    let dy: f64 = rng.gen_range(-amp..=amp);
                    v[id] = orig + Point2::new(T::lit(dx), T::lit(dy));
                    let ok = adjacent.iter().all(|&(ci, cj)| {
                        let loop_pts: Vec<Point2<T>> = cells[cj * n + ci].iter().map(|&k| v[k]).collect();
                        validate_loop(&loop_pts).is_ok()
                    });
                    if ok {
                        break;
                    }
                    v[id] = orig;
                }
            }
        }
    }
    build_topology(v, cells)
}

/// Seeds `((i + 1/2) h, (j + 1/2) h +- h/4)`, the sign alternating with the column.
pub fn staggered_seeds<T: Real>(n: usize) -> Vec<Point2<T>> {
    let h = 1.0 / n as f64;
    let mut s = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let shift = if i % 2 == 0 { 0.25 } else { -0.25 };
            s.push(Point2::new(
                T::lit((i as f64 + 0.5) * h),
                T::lit((j as f64 + 0.5 + shift) * h),
            ));
        }
    }
    s
}

/// Voronoi cell of `seeds[seed]` inside the box `[lo, hi]`, by clipping the box
/// against the bisector half-planes of all seeds within `radius` (all seeds when `None`).
pub fn voronoi_cell<T: Real>(
    seed: usize,
    seeds: &[Point2<T>],
    lo: Point2<T>,
    hi: Point2<T>,
    radius: Option<T>,
) -> Result<Polygon<T>> {
    let p = seeds[seed];
    let mut poly = vec![lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    let scale = (hi - lo).norm();
    let tiny = scale * T::lit(1e-12);
    for (k, &s) in seeds.iter().enumerate() {
        if k == seed || radius.is_some_and(|r| s.distance(p) > r) {
            continue;
        }
        if s.distance(p) <= tiny {
            return Err(FemError::InvalidArgument(format!("seeds {seed} and {k} coincide")));
        }
        let d = s - p;
        let m = (s + p) * T::lit(0.5);
        let side = |x: Point2<T>| (x - m).dot(d);
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            let (fa, fb) = (side(a), side(b));
            if fa <= T::zero() {
                out.push(a);
            }
            if (fa < T::zero() && fb > T::zero()) || (fa > T::zero() && fb < T::zero()) {
                out.push(a + (b - a) * (fa / (fa - fb)));
            }
        }
        out.dedup_by(|a, b| a.distance(*b) <= tiny);
        while out.len() > 1 && out[0].distance(out[out.len() - 1]) <= tiny {
            out.pop();
        }
        if out.len() < 3 {
            return Err(FemError::EmptyVoronoiCell { seed });
        }
        poly = out;
    }
    Polygon::new(poly).map_err(|_| FemError::EmptyVoronoiCell { seed })
}

/// Mesh from independent cell loops; coincident vertices (within `tol`) are merged.
pub fn mesh_from_loops<T: Real>(loops: Vec<Vec<Point2<T>>>, tol: T) -> Result<Mesh<T>> {
    let mut vertices: Vec<Point2<T>> = Vec::new();
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |x: Point2<T>| {
        (
            (x.x / tol).floor().to_i64().unwrap_or(0).div_euclid(4),
            (x.y / tol).floor().to_i64().unwrap_or(0).div_euclid(4),
        )
    };
    let mut cells = Vec::with_capacity(loops.len());
    for lp in loops {
        let mut cell = Vec::with_capacity(lp.len());
        for x in lp {
            let (kx, ky) = key(x);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = buckets.get(&(kx + dx, ky + dy)) {
                        if let Some(&v) = list.iter().find(|&&v| vertices[v].distance(x) <= tol) {
                            found = Some(v);
                            break 'search;
                        }
                    }
                }
            }
            let id = found.unwrap_or_else(|| {
                vertices.push(x);
                buckets.entry((kx, ky)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
            if cell.last() != Some(&id) {
                cell.push(id);
            }
        }
        while cell.len() > 1 && cell.first() == cell.last() {
            cell.pop();
        }
        cells.push(cell);
    }
    build_topology(vertices, cells)
}

/// Hexagon-dominant mesh: the Voronoi diagram of the staggered `n x n` seed
/// lattice, clipped to the unit square.
pub fn gen_hex_dominant_mesh<T: Real>(n: usize) -> Result<Mesh<T>> {
    check_n(n)?;
    let seeds = staggered_seeds::<T>(n);
    let radius = T::lit(3.0) / T::from_usize_lossy(n);
    let (lo, hi) = (Point2::new(T::zero(), T::zero()), Point2::new(T::one(), T::one()));
    let loops = (0..seeds.len())
        .map(|k| voronoi_cell(k, &seeds, lo, hi, Some(radius)).map(|p| p.vertices().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    mesh_from_loops(loops, T::lit(1e-9) / T::from_usize_lossy(n))
}
