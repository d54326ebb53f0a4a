mod common;

use common::*;
use directfem::assembly::*;
use directfem::linalg::{numerical_rank, CsrMatrix, DenseMatrix};
use directfem::mesh::*;
use directfem::mixed::{MixedInterpolant, MixedScratch};
use directfem::quadrature::polygon_rule;
use directfem::serendipity::ds_dimension;
use directfem::Point2;
use proptest::prelude::*;
use rand::Rng;

fn dense(a: &CsrMatrix<f64>) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a.get(i, j))
}

fn one_hump() -> ExactSolution<f64> {
    ExactSolution::OneHump
}

fn cholesky_ok(a: &DenseMatrix<f64>) -> bool {
    let n = a.rows();
    let mut l = DenseMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return false;
        }
        l[(j, j)] = d.sqrt();
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / l[(j, j)];
        }
    }
    true
}

#[test]
fn primal_matrix_symmetric_and_annihilates_constants() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    for r in 1..=3 {
        let a = assemble_primal(&m, r, &|x| ex.f(x), None, None).unwrap();
        let scale = a.stiffness.triplets().fold(0.0f64, |s, t| s.max(t.2.abs()));
        assert!(a.stiffness.asymmetry() < 1e-12 * scale);
        assert!(a.system.is_symmetric());
        let ones = vec![1.0; a.dofmap.n_dofs];
        let k1 = a.stiffness.matvec(&ones);
        let worst = k1.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        assert!(worst < 1e-10 * scale, "r={r}: {worst}");
    }
}

#[test]
fn single_square_element_has_empty_system() {
    let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)];
    let m = build_topology(v, vec![vec![0, 1, 2, 3]]).unwrap();
    let a = assemble_primal(&m, 1, &|_| 1.0, None, None).unwrap();
    assert_eq!(a.system.len(), 0);
    let rep = solve(&a.system, &SolverOptions::default()).unwrap();
    assert!(rep.solution.is_empty());
    assert_eq!(a.expand(&rep.solution), vec![0.0; 4]);
}

#[test]
fn primal_dof_counts_follow_object_counts() {
    for m in [gen_hex_dominant_mesh::<f64>(4).unwrap(), gen_trapezoid_mesh(3).unwrap()] {
        for r in 1..=6 {
            let d = primal_dofmap(&m, r);
            let interior: usize = (0..m.num_cells())
                .map(|c| {
                    let nv = m.polygon(c).num_vertices();
                    if r >= nv { (r - nv + 1) * (r - nv + 2) / 2 } else { 0 }
                })
                .sum();
            assert_eq!(d.n_dofs, m.num_vertices() + m.num_edges() * (r - 1) + interior);
            // local counts agree with the element dimension
            for c in 0..m.num_cells() {
                let nv = m.polygon(c).num_vertices();
                assert_eq!(d.cell_dofs[c].len(), ds_dimension(nv, r));
            }
        }
    }
}

#[test]
fn mixed_dof_counts_follow_object_counts() {
    let m = gen_hex_dominant_mesh::<f64>(3).unwrap();
    for (r, s) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)] {
        let a = assemble_mixed(&m, r, s, &|_| 0.0, None, None).unwrap();
        let interior: usize = a.elements.iter().map(|e| e.dim() - e.polygon().num_vertices() * (r + 1)).sum();
        assert_eq!(a.dofmap.n_flux, m.num_edges() * (r + 1) + interior);
        assert_eq!(a.dofmap.n_pressure, m.num_cells() * (s + 1) * (s + 2) / 2);
    }
}

#[test]
fn shared_dofs_agree_between_neighbours() {
    // the global nodes referenced by two cells sharing an edge are at the same place
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let a = assemble_primal(&m, 4, &|_| 0.0, None, None).unwrap();
    let mut seen: std::collections::HashMap<usize, Point2<f64>> = Default::default();
    for c in 0..m.num_cells() {
        let pts = &a.elements[c].nodes().points;
        for (i, &g) in a.dofmap.cell_dofs[c].iter().enumerate() {
            if let Some(p) = seen.insert(g, pts[i]) {
                assert!((p - pts[i]).norm() < 1e-13);
            }
        }
    }
    assert_eq!(seen.len(), a.dofmap.n_dofs);
}

#[test]
fn mixed_blocks_mass_spd_and_divergence_full_rank() {
    let m = gen_square_mesh::<f64>(2).unwrap();
    let a = assemble_mixed(&m, 1, 0, &|_| 1.0, None, None).unwrap();
    let b = dense(&a.divergence);
    assert_eq!(b.rows(), 4);
    assert_eq!(numerical_rank(&b, 1e-10), 4);
    let mm = dense(&a.mass);
    assert!(a.mass.asymmetry() < 1e-14);
    assert!(cholesky_ok(&mm));
    assert!(a.system.is_symmetric());
}

#[test]
fn divergence_of_interpolant_matches_moments() {
    let m = gen_hex_dominant_mesh::<f64>(3).unwrap();
    let ex = one_hump();
    for (r, s) in [(1, 0), (1, 1), (2, 2)] {
        let a = assemble_mixed(&m, r, s, &|_| 0.0, None, None).unwrap();
        let mut global = vec![f64::NAN; a.dofmap.n_flux];
        for c in 0..m.num_cells() {
            let pi = MixedInterpolant::new(&a.elements[c], 30).unwrap();
            let local = pi.project(&a.elements[c], |x| ex.u(x)).unwrap();
            for (i, &(g, sg)) in a.dofmap.cell_dofs[c].iter().enumerate() {
                let v = sg as f64 * local[i];
                if !global[g].is_nan() {
                    assert!((global[g] - v).abs() < 1e-8, "neighbours disagree at {g}");
                }
                global[g] = v;
            }
        }
        let bu = a.divergence.matvec(&global);
        for c in 0..m.num_cells() {
            let rule = polygon_rule(m.polygon(c), 24).unwrap();
            let mons = a.elements[c].monomials();
            for (k, gk) in a.dofmap.cell_pressure[c].clone().enumerate() {
                let moment = rule.integrate(|x| ex.div_u(x) * mons.values(x)[k]);
                let g = gk - a.dofmap.n_flux;
                assert!((bu[g] - moment).abs() < 1e-9 * (1.0 + moment.abs()), "{} vs {}", bu[g], moment);
            }
        }
    }
}

#[test]
fn identity_system_returns_rhs() {
    let n = 7;
    let id = CsrMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect());
    let rhs: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
    for kind in [SystemKind::Spd, SystemKind::Saddle { n_flux: 4, n_pressure: 3 }] {
        let sys = SparseSystem { matrix: id.clone(), rhs: rhs.clone(), kind };
        let rep = solve(&sys, &SolverOptions::default()).unwrap();
        for (a, b) in rep.solution.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn primal_residual_on_hex_mesh() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    let s = solve_primal(&m, 2, &|x| ex.f(x), None, None, &SolverOptions::default()).unwrap();
    assert_eq!(s.report.method, SolveMethod::ConjugateGradient);
    let sys = &s.assembly.system;
    let ax = sys.matrix.matvec(&s.report.solution);
    let res: f64 = ax.iter().zip(&sys.rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let bn: f64 = sys.rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
    assert!(res / bn < 1e-12, "{}", res / bn);
}

#[test]
fn galerkin_residual_vanishes_for_random_test_functions() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    let f = |x| ex.f(x);
    let g = |x| ex.p(x);
    let s = solve_primal(&m, 3, &f, Some(&g), None, &SolverOptions::default()).unwrap();
    let a = &s.assembly;
    let mut rng = rng(11);
    for _ in 0..20 {
        let mut v = vec![0.0; a.dofmap.n_dofs];
        for &i in &a.free {
            v[i] = rng.gen_range(-1.0..1.0);
        }
        let (mut res, mut scale) = (0.0, 0.0);
        for c in 0..m.num_cells() {
            let el = &a.elements[c];
            let (ph, vh) = (a.local(c, &s.coeffs), a.local(c, &v));
            let rule = polygon_rule(m.polygon(c), 20).unwrap();
            for (&x, &w) in rule.points.iter().zip(&rule.weights) {
                let (_, gp) = el.evaluate(&ph, x);
                let (vv, gv) = el.evaluate(&vh, x);
                res += w * (gp.dot(gv) - f(x) * vv);
                scale += w * (gp.dot(gv).abs() + (f(x) * vv).abs());
            }
        }
        assert!(res.abs() < 1e-9 * scale, "{res} vs {scale}");
    }
}

fn hex3() -> Mesh<f64> {
    gen_hex_dominant_mesh(3).unwrap()
}

#[test]
fn primal_patch_test_reproduces_polynomials() {
    let m = hex3();
    assert!(m.ngon_census().len() >= 3);
    let opts = SolverOptions::default();
    for r in 1..=3 {
        let terms: Vec<(usize, usize, f64)> = (0..=r)
            .flat_map(|a| (0..=r - a).map(move |b| (a, b, 0.3 + 0.1 * (a as f64) - 0.2 * (b as f64))))
            .collect();
        let ex = ExactSolution::Polynomial(terms);
        let s = solve_primal(&m, r, &|x| ex.f(x), Some(&|x| ex.p(x)), None, &opts).unwrap();
        let e = primal_errors(&m, &s.assembly, &s.coeffs, &ex, None).unwrap();
        assert!(e.l2 < 1e-9 && e.h1_semi < 1e-9, "r={r}: {e:?}");
    }
}

#[test]
fn mixed_patch_test_reproduces_polynomials() {
    let m = hex3();
    let opts = SolverOptions::default();
    for r in 0..=3usize {
        for s in [r.saturating_sub(1), r] {
            // u = -grad p lies in P_r^2 when p has degree s <= r
            let terms: Vec<(usize, usize, f64)> = (0..=s)
                .flat_map(|a| (0..=s - a).map(move |b| (a, b, 0.7 - 0.3 * (a as f64) + 0.2 * (b as f64))))
                .collect();
            let ex = ExactSolution::Polynomial(terms);
            let sol = solve_mixed(&m, r, s, &|x| ex.f(x), Some(&|x| ex.p(x)), None, &opts).unwrap();
            let e = mixed_errors(&m, &sol.assembly, &sol.coeffs, &ex, None).unwrap();
            assert!(e.l2_p < 1e-9 && e.l2_u < 1e-9 && e.l2_div < 1e-9, "r={r} s={s}: {e:?}");
        }
    }
}

#[test]
fn mixed_solution_is_locally_conservative() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    let f = |x| ex.f(x);
    let sol = solve_mixed(&m, 1, 0, &f, None, None, &SolverOptions::default()).unwrap();
    let a = &sol.assembly;
    for c in 0..m.num_cells() {
        let el = &a.elements[c];
        let flux = a.local_flux(c, &sol.coeffs);
        let deg = mixed_quad_degree(el);
        let rule = polygon_rule(m.polygon(c), deg).unwrap();
        let mut scratch = MixedScratch::default();
        let mut vals = Vec::new();
        let mut bal = 0.0;
        for (&x, &w) in rule.points.iter().zip(&rule.weights) {
            el.eval_all_into(x, &mut scratch, &mut vals);
            let d: f64 = flux.iter().zip(&vals).map(|(a, v)| a * v.1).sum();
            bal += w * (d - f(x));
        }
        assert!(bal.abs() < 1e-10, "cell {c}: {bal}");
    }
}

#[test]
fn mixed_flux_is_normal_continuous() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    let sol = solve_mixed(&m, 2, 2, &|x| ex.f(x), None, None, &SolverOptions::default()).unwrap();
    let a = &sol.assembly;
    for (gi, e) in m.edges().iter().enumerate() {
        let Some(right) = e.right else { continue };
        let (p, q) = (m.vertices()[e.vertices.0], m.vertices()[e.vertices.1]);
        let nu = (q - p).perp_right() / (q - p).norm();
        for t in [0.13, 0.5, 0.77] {
            let x = p + (q - p) * t;
            let val = |c: usize| {
                let (v, _) = a.elements[c].evaluate(&a.local_flux(c, &sol.coeffs), x);
                v.dot(nu)
            };
            assert!((val(e.left) - val(right)).abs() < 1e-9, "edge {gi}");
        }
    }
}

#[test]
fn zero_data_gives_zero_solution_and_errors() {
    let m = hex3();
    let ex = ExactSolution::Zero;
    let opts = SolverOptions::default();
    let s = solve_primal(&m, 2, &|x| ex.f(x), None, None, &opts).unwrap();
    assert!(s.coeffs.iter().all(|&v| v == 0.0));
    let e = primal_errors(&m, &s.assembly, &s.coeffs, &ex, None).unwrap();
    assert_eq!((e.l2, e.h1_semi), (0.0, 0.0));
    let sm = solve_mixed(&m, 1, 1, &|x| ex.f(x), None, None, &opts).unwrap();
    assert!(sm.coeffs.iter().all(|&v| v == 0.0));
    let e = mixed_errors(&m, &sm.assembly, &sm.coeffs, &ex, None).unwrap();
    assert_eq!((e.l2_p, e.l2_u, e.l2_div), (0.0, 0.0, 0.0));
}

#[test]
fn interpolation_error_is_positive_and_decreasing() {
    let ex = one_hump();
    let mut prev = f64::INFINITY;
    for n in [2, 4, 8] {
        let m = gen_hex_dominant_mesh::<f64>(n).unwrap();
        let a = assemble_primal(&m, 2, &|_| 0.0, None, None).unwrap();
        let mut x = vec![0.0; a.dofmap.n_dofs];
        for c in 0..m.num_cells() {
            let local = a.elements[c].interpolate(|p| ex.p(p));
            for (i, &g) in a.dofmap.cell_dofs[c].iter().enumerate() {
                x[g] = local[i];
            }
        }
        let e = primal_errors(&m, &a, &x, &ex, None).unwrap();
        assert!(e.l2 > 0.0 && e.l2 < prev);
        prev = e.l2;
    }
}

#[test]
fn convergence_rate_examples() {
    let r = convergence_rates(&[1.0, 1.0 / 8.0], &[1.0, 0.5]).unwrap();
    assert!((r[0] - 3.0).abs() < 1e-14);
    let r = convergence_rates(&[0.3, 0.3], &[1.0, 0.5]).unwrap();
    assert_eq!(r[0], 0.0);
    let r = convergence_rates(&[1.991e-4, 6.960e-5], &[1.0 / 10.0, 1.0 / 14.0]).unwrap();
    assert!((r[0] - 3.12).abs() < 0.005, "{}", r[0]);
    assert!(convergence_rates(&[1.0], &[1.0, 0.5]).is_err());
}

#[test]
fn primal_rates_on_hex_meshes() {
    let ex = one_hump();
    let opts = SolverOptions::default();
    let (mut l2, mut h1, mut hs) = (vec![], vec![], vec![]);
    for n in [4, 8] {
        let m = gen_hex_dominant_mesh::<f64>(n).unwrap();
        let s = solve_primal(&m, 2, &|x| ex.f(x), None, None, &opts).unwrap();
        let e = primal_errors(&m, &s.assembly, &s.coeffs, &ex, None).unwrap();
        l2.push(e.l2);
        h1.push(e.h1_semi);
        hs.push(m.h_max());
    }
    assert!(convergence_rates(&l2, &hs).unwrap()[0] > 2.7);
    assert!(convergence_rates(&h1, &hs).unwrap()[0] > 1.7);
}

#[test]
fn cell_error_csv_has_one_row_per_cell() {
    let m = hex3();
    let errs: Vec<f64> = (0..m.num_cells()).map(|c| c as f64 * 0.5).collect();
    let mut buf = Vec::new();
    write_cell_errors(&m, &errs, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "cell_id,centroid_x,centroid_y,L2_error");
    assert_eq!(lines.len(), m.num_cells() + 1);
    assert!(lines[3].starts_with("2,") && lines[3].ends_with(",1.0"));
}

#[test]
fn matrix_market_round_trip() {
    let m = hex3();
    let a = assemble_primal(&m, 1, &|_| 1.0, None, None).unwrap();
    let mut buf = Vec::new();
    write_matrix_market(&a.system.matrix, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("%%MatrixMarket matrix coordinate real"));
    let dims: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(dims, vec![a.system.len(), a.system.len(), a.system.matrix.nnz()]);
    let trip: Vec<_> = lines
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            (t[0].parse::<usize>().unwrap() - 1, t[1].parse::<usize>().unwrap() - 1, t[2].parse::<f64>().unwrap())
        })
        .collect();
    let back = CsrMatrix::from_triplets(dims[0], dims[1], trip);
    for (i, j, v) in a.system.matrix.triplets() {
        assert_eq!(back.get(i, j), v);
    }
}

#[test]
fn assembly_is_deterministic_across_thread_counts() {
    let m = gen_hex_dominant_mesh::<f64>(4).unwrap();
    let ex = one_hump();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| assemble_mixed(&m, 1, 1, &|x| ex.f(x), None, None).unwrap())
    };
    let (a, b) = (run(1), run(4));
    let ta: Vec<_> = a.system.matrix.triplets().collect();
    let tb: Vec<_> = b.system.matrix.triplets().collect();
    assert_eq!(ta, tb);
    assert_eq!(a.system.rhs, b.system.rhs);
}

#[test]
fn short_edge_falls_back_to_direct_solve() {
    let m = split_centre_mesh(4, 1e-3 * 0.25);
    let ex = one_hump();
    let s = solve_primal(&m, 4, &|x| ex.f(x), None, None, &SolverOptions::default()).unwrap();
    assert_eq!(s.report.method, SolveMethod::BandedLu);
    let forced = SolverOptions { method: Some(SolveMethod::ConjugateGradient), ..Default::default() };
    assert!(solve_primal(&m, 4, &|x| ex.f(x), None, None, &forced).is_err());
}

#[test]
fn f32_primal_solve_runs() {
    let m = gen_square_mesh::<f32>(4).unwrap();
    let f = |x: Point2<f32>| 2.0 * std::f32::consts::PI.powi(2) * (std::f32::consts::PI * x.x).sin() * (std::f32::consts::PI * x.y).sin();
    let opts = SolverOptions { rtol: 1e-5, ..Default::default() };
    let s = solve_primal(&m, 2, &f, None, None, &opts).unwrap();
    let e = primal_errors(&m, &s.assembly, &s.coeffs, &ExactSolution::OneHump, None).unwrap();
    assert!(e.l2 < 1e-2, "{e:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn linear_fields_reproduced_on_perturbed_meshes(seed in 0u64..1000, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let m = gen_perturbed_quad_mesh::<f64>(3, 0.2, seed).unwrap();
        let ex = ExactSolution::Polynomial(vec![(0, 0, 0.5), (1, 0, a), (0, 1, b)]);
        let s = solve_primal(&m, 1, &|x| ex.f(x), Some(&|x| ex.p(x)), None, &SolverOptions::default()).unwrap();
        let e = primal_errors(&m, &s.assembly, &s.coeffs, &ex, None).unwrap();
        prop_assert!(e.l2 < 1e-10);
        let sm = solve_mixed(&m, 1, 1, &|x| ex.f(x), Some(&|x| ex.p(x)), None, &SolverOptions::default()).unwrap();
        let em = mixed_errors(&m, &sm.assembly, &sm.coeffs, &ex, None).unwrap();
        prop_assert!(em.l2_u < 1e-10 && em.l2_p < 1e-10);
    }
}
