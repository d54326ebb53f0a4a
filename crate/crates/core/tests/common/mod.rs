#![allow(dead_code)]

use directfem::geometry::{Point2, Polygon};
use directfem::linalg::{DenseMatrix, Lu};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_square() -> Polygon<f64> {
    Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
}

pub fn pentagon() -> Polygon<f64> {
    Polygon::regular(5, Point2::new(0.0, 0.0), 1.0, 0.2).unwrap()
}

/// Random convex combinations of the vertices.
pub fn interior_points(e: &Polygon<f64>, count: usize, seed: u64) -> Vec<Point2<f64>> {
    let mut r = rng(seed);
    let n = e.num_vertices();
    (0..count)
        .map(|_| {
            let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            e.vertices()
                .iter()
                .zip(&w)
                .fold(Point2::zero(), |acc, (&v, &wi)| acc + v * (wi / s))
        })
        .collect()
}

/// Max residual of the least-squares fit of samples by a polynomial of degree `deg`.
pub fn poly_fit_residual(ts: &[f64], vs: &[f64], deg: usize) -> f64 {
    let m = deg + 1;
    let mut ata = DenseMatrix::<f64>::zeros(m, m);
    let mut atb = vec![0.0; m];
    for (&t, &v) in ts.iter().zip(vs) {
        for i in 0..m {
            atb[i] += t.powi(i as i32) * v;
            for j in 0..m {
                ata[(i, j)] += t.powi((i + j) as i32);
            }
        }
    }
    let c = Lu::factor(ata).unwrap().solve(&atb);
    ts.iter()
        .zip(vs)
        .map(|(&t, &v)| (v - (0..m).map(|i| c[i] * t.powi(i as i32)).sum::<f64>()).abs())
        .fold(0.0, f64::max)
}

/// Least-squares slope of `log err` against `log h`.
pub fn fitted_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `n x n` square mesh (even `n`) whose centre vertex is split into two vertices
/// joined by a diagonal edge of length `delta`.
pub fn split_centre_mesh(n: usize, delta: f64) -> directfem::mesh::Mesh<f64> {
    assert!(n % 2 == 0);
    let sq = directfem::mesh::gen_square_mesh::<f64>(n).unwrap();
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let m = n / 2;
    let c = id(m, m);
    let mut v = sq.vertices().to_vec();
    let off = Point2::new(-1.0, 1.0) * (delta / (2.0 * 2f64.sqrt()));
    let centre = v[c];
    v[c] = centre + off;
    v.push(centre - off);
    let (a, b) = (c, v.len() - 1);
    let mut cells = sq.cells().to_vec();
    let cell = |i: usize, j: usize| j * n + i;
    cells[cell(m - 1, m - 1)] = vec![id(m - 1, m - 1), id(m, m - 1), b, a, id(m - 1, m)];
    cells[cell(m, m)] = vec![b, id(m + 1, m), id(m + 1, m + 1), id(m, m + 1), a];
    cells[cell(m, m - 1)] = vec![id(m, m - 1), id(m + 1, m - 1), id(m + 1, m), b];
    cells[cell(m - 1, m)] = vec![id(m - 1, m), a, id(m, m + 1), id(m - 1, m + 1)];
    directfem::mesh::build_topology(v, cells).unwrap()
}
