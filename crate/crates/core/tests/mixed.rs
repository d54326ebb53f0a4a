mod common;

use common::*;
use directfem::geometry::{random_convex_polygon, Point2, Polygon, Vector2};
use directfem::linalg::{numerical_rank, DenseMatrix, Lu};
use directfem::mixed::*;
use directfem::quadrature::{edge_rule, polygon_rule};
use proptest::prelude::*;

fn hexagon() -> Polygon<f64> {
    Polygon::from_coords(&[
        (0.0, 0.0),
        (1.0, -0.1),
        (1.6, 0.5),
        (1.4, 1.2),
        (0.5, 1.4),
        (-0.2, 0.7),
    ])
    .unwrap()
}

fn s_values(r: usize) -> Vec<usize> {
    if r == 0 {
        vec![0]
    } else {
        vec![r - 1, r]
    }
}

// derivative of the Lagrange polynomial for node j on the points m / (r + 1)
fn lagrange_derivative(r: usize, j: usize, t: f64) -> f64 {
    let q = r + 1;
    let tm = |m: usize| m as f64 / q as f64;
    let mut total = 0.0;
    for k in 0..=q {
        if k == j {
            continue;
        }
        let mut p = 1.0 / (tm(j) - tm(k));
        for m in 0..=q {
            if m != j && m != k {
                p *= (t - tm(m)) / (tm(j) - tm(m));
            }
        }
        total += p;
    }
    total
}

fn normal_trace(el: &MixedElement<f64>, edge: usize, t: f64) -> Vec<f64> {
    let e = el.polygon();
    let x = e.edge_point(edge, t);
    let nu = e.normal(edge);
    el.eval_all(x).into_iter().map(|(v, _)| v.dot(nu)).collect()
}

fn fluxes(el: &MixedElement<f64>, edge: usize) -> Vec<f64> {
    let e = el.polygon();
    let rule = edge_rule(e, edge, 2 * el.order() + 4).unwrap();
    let nu = e.normal(edge);
    let mut out = vec![0.0; el.dim()];
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        for (o, (v, _)) in out.iter_mut().zip(el.eval_all(*x)) {
            *o += w * v.dot(nu);
        }
    }
    out
}

#[test]
fn dimension_examples() {
    assert_eq!(mixed_dimension(5, 1, 0), 10);
    assert_eq!(mixed_dimension(5, 2, 2), 20);
    // 16 edge functions, 9 divergence functions, 1 bubble
    assert_eq!(mixed_dimension(4, 3, 3), 16 + 9 + 1);
}

#[test]
fn basis_count_matches_dimension() {
    let mut g = rng(3);
    for n in 3..=8 {
        let e = random_convex_polygon::<f64, _>(&mut g, n, 0.15);
        for r in 0..=5 {
            for s in s_values(r) {
                let el = build_mixed_element(&e, r, s).unwrap();
                assert_eq!(el.dim(), mixed_dimension(n, r, s), "N={n} r={r} s={s}");
                let bubbles = el.kinds().iter().filter(|k| matches!(k, MixedKind::Bubble(_))).count();
                let expect = if r + 1 >= n { (r + 3 - n) * (r + 2 - n) / 2 } else { 0 };
                assert_eq!(bubbles, expect);
            }
        }
    }
}

#[test]
fn rejects_bad_divergence_degree() {
    assert!(build_mixed_element(&unit_square(), 3, 1).is_err());
    assert!(build_mixed_element(&unit_square(), 1, 2).is_err());
}

#[test]
fn curl_families_are_divergence_free() {
    for (e, r) in [(pentagon(), 3), (hexagon(), 2), (unit_square(), 4), (hexagon(), 6)] {
        let el = build_mixed_element(&e, r, r).unwrap();
        for x in interior_points(&e, 50, 5) {
            for ((_, d), k) in el.eval_all(x).into_iter().zip(el.kinds()) {
                if matches!(k, MixedKind::EdgeMoment { .. } | MixedKind::Bubble(_)) {
                    assert!(d.abs() < 1e-12, "{k:?}: {d:e}");
                }
            }
        }
    }
}

#[test]
fn divergence_matches_finite_differences() {
    let e = hexagon();
    let el = build_mixed_element(&e, 2, 2).unwrap();
    let h = 1e-6;
    for x in interior_points(&e, 5, 8) {
        let at = |dx: f64, dy: f64| el.eval_all(x + Vector2::new(dx, dy));
        let (px, mx, py, my) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        for (i, (_, d)) in el.eval_all(x).into_iter().enumerate() {
            let fd = (px[i].0.x - mx[i].0.x + py[i].0.y - my[i].0.y) / (2.0 * h);
            assert!((fd - d).abs() < 1e-5 * d.abs().max(1.0), "{i}: {fd} vs {d}");
        }
    }
}

#[test]
fn normal_traces_have_degree_r() {
    let mut g = rng(17);
    for n in [3, 4, 5, 6, 7] {
        let e = random_convex_polygon::<f64, _>(&mut g, n, 0.15);
        for r in 0..=4 {
            for s in s_values(r) {
                let el = build_mixed_element(&e, r, s).unwrap();
                let ts: Vec<f64> = (0..=2 * r + 4).map(|k| (k as f64 + 0.5) / (2 * r + 5) as f64).collect();
                for edge in 0..n {
                    let traces: Vec<Vec<f64>> = ts.iter().map(|&t| normal_trace(&el, edge, t)).collect();
                    for i in 0..el.dim() {
                        let vs: Vec<f64> = traces.iter().map(|row| row[i]).collect();
                        let scale = vs.iter().fold(1.0f64, |a, b| a.max(b.abs()));
                        let res = poly_fit_residual(&ts, &vs, r) / scale;
                        assert!(res < 1e-9, "N={n} r={r} s={s} edge={edge} fn={i}: {res:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn flux_structure() {
    let mut g = rng(23);
    let polys = vec![unit_square(), pentagon(), random_convex_polygon::<f64, _>(&mut g, 5, 0.15), hexagon()];
    for e in polys {
        for r in 0..=3 {
            for s in s_values(r) {
                let el = build_mixed_element(&e, r, s).unwrap();
                for edge in 0..e.num_vertices() {
                    let f = fluxes(&el, edge);
                    for (k, &v) in el.kinds().iter().zip(&f) {
                        let expect = if *k == MixedKind::EdgeFlux(edge) { 1.0 } else { 0.0 };
                        assert!((v - expect).abs() < 1e-11, "r={r} {k:?} on {edge}: {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn edge_flux_functions_vanish_on_other_edges_and_have_constant_divergence() {
    let e = hexagon();
    let el = build_mixed_element(&e, 2, 1).unwrap();
    let n = e.num_vertices();
    for i in 0..n {
        let idx = el.index_of(MixedKind::EdgeFlux(i)).unwrap();
        for k in 0..n {
            for t in [0.1, 0.37, 0.8] {
                let v = normal_trace(&el, k, t)[idx];
                let expect = if k == i { 1.0 / e.edge_length(i) } else { 0.0 };
                assert!((v - expect).abs() < 1e-11);
            }
        }
        let divs: Vec<f64> = interior_points(&e, 30, 4).into_iter().map(|x| el.eval_all(x)[idx].1).collect();
        let mean = divs.iter().sum::<f64>() / divs.len() as f64;
        let var = divs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / divs.len() as f64;
        assert!(var < 1e-20);
        assert!((mean - 1.0 / e.area()).abs() < 1e-11);
    }
}

#[test]
fn flux_constants_are_positive_on_random_polygons() {
    let mut g = rng(101);
    for k in 0..100 {
        let n = 3 + k % 6;
        let e = random_convex_polygon::<f64, _>(&mut g, n, 0.05);
        let el = build_mixed_element(&e, 0, 0).unwrap();
        let c = el.flux_constants();
        for i in 0..n {
            for jj in i + 3..=i + n {
                assert!(c[(i, jj % n)] > 0.0);
            }
        }
    }
}

#[test]
fn edge_moment_traces_are_lagrange_derivatives() {
    for (e, r) in [(pentagon(), 2), (hexagon(), 1), (hexagon(), 3), (unit_square(), 3)] {
        let el = build_mixed_element(&e, r, r - 1).unwrap();
        for edge in 0..e.num_vertices() {
            for t in [0.05, 0.3, 0.61, 0.9] {
                let tr = normal_trace(&el, edge, t);
                for j in 1..=r {
                    let idx = el.index_of(MixedKind::EdgeMoment { edge, j }).unwrap();
                    let oracle = lagrange_derivative(r, j, t) / e.edge_length(edge);
                    assert!((tr[idx] - oracle).abs() < 1e-10 * oracle.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn divergence_functions_have_no_flux() {
    let e = hexagon();
    let el = build_mixed_element(&e, 2, 2).unwrap();
    let n = e.num_vertices();
    for (i, k) in el.kinds().iter().enumerate() {
        if let MixedKind::Divergence(_) | MixedKind::Bubble(_) = k {
            for edge in 0..n {
                for t in [0.0, 0.13, 0.5, 0.77, 1.0] {
                    assert!(normal_trace(&el, edge, t)[i].abs() < 1e-10);
                }
            }
        }
    }
    let bubble = build_mixed_element(&unit_square(), 5, 5).unwrap();
    for (i, k) in bubble.kinds().iter().enumerate() {
        if let MixedKind::Bubble(_) = k {
            for edge in 0..4 {
                for t in [0.2, 0.5, 0.9] {
                    assert!(normal_trace(&bubble, edge, t)[i].abs() < 1e-11);
                }
            }
        }
    }
}

#[test]
fn first_divergence_function_has_divergence_three_x() {
    let e = hexagon();
    let el = build_mixed_element(&e, 1, 1).unwrap();
    let idx = el.index_of(MixedKind::Divergence(0)).unwrap();
    let mons = el.monomials();
    for x in interior_points(&e, 10, 2) {
        let sx = (x.x - mons.center.x) / mons.scale;
        assert!((el.eval_all(x)[idx].1 - 3.0 * sx).abs() < 1e-12);
    }
    assert!(build_mixed_element(&e, 1, 0)
        .unwrap()
        .kinds()
        .iter()
        .all(|k| !matches!(k, MixedKind::Divergence(_))));
}

fn gram_projection_residual(el: &MixedElement<f64>, f: impl Fn(Point2<f64>) -> Vector2<f64>) -> f64 {
    let rule = polygon_rule(el.polygon(), 2 * el.order() + 10).unwrap();
    let d = el.dim();
    let mut gm = DenseMatrix::<f64>::zeros(d, d);
    let mut b = vec![0.0; d];
    let mut ff = 0.0;
    let vals: Vec<_> = rule.points.iter().map(|&x| el.eval_all(x)).collect();
    for (q, &w) in rule.weights.iter().enumerate() {
        let fx = f(rule.points[q]);
        ff += w * fx.dot(fx);
        for i in 0..d {
            b[i] += w * vals[q][i].0.dot(fx);
            for j in 0..d {
                gm[(i, j)] += w * vals[q][i].0.dot(vals[q][j].0);
            }
        }
    }
    let c = Lu::factor(gm).unwrap().solve(&b);
    let mut res = 0.0;
    for (q, &w) in rule.weights.iter().enumerate() {
        let fx = f(rule.points[q]);
        let approx = vals[q].iter().zip(&c).fold(Vector2::zero(), |a, ((v, _), &ci)| a + *v * ci);
        res += w * (fx - approx).norm_squared();
    }
    (res / ff).sqrt()
}

#[test]
fn contains_vector_polynomials() {
    let mut g = rng(41);
    for (e, r) in [
        (pentagon(), 1),
        (pentagon(), 2),
        (hexagon(), 3),
        (unit_square(), 2),
        (random_convex_polygon::<f64, _>(&mut g, 7, 0.15), 2),
    ] {
        for s in s_values(r) {
            let el = build_mixed_element(&e, r, s).unwrap();
            let c = e.centroid();
            for d in 0..=r {
                for b in 0..=d {
                    let a = d - b;
                    let m = move |x: Point2<f64>| (x.x - c.x).powi(a as i32) * (x.y - c.y).powi(b as i32);
                    for comp in 0..2 {
                        let res = gram_projection_residual(&el, |x| {
                            if comp == 0 {
                                Vector2::new(m(x), 0.0)
                            } else {
                                Vector2::new(0.0, m(x))
                            }
                        });
                        assert!(res < 1e-8, "r={r} s={s} ({a},{b}) comp {comp}: {res:e}");
                    }
                    if s == r && d == r {
                        let res = gram_projection_residual(&el, |x| (x - c) * m(x));
                        assert!(res < 1e-8, "x p for ({a},{b}): {res:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn divergence_spans_ps() {
    for (e, r) in [(pentagon(), 2), (hexagon(), 3), (unit_square(), 1)] {
        for s in s_values(r) {
            let el = build_mixed_element(&e, r, s).unwrap();
            let mons = el.monomials();
            let rule = polygon_rule(&e, 2 * r + 6).unwrap();
            let mut m = DenseMatrix::<f64>::zeros(el.dim(), mons.len());
            for (x, w) in rule.points.iter().zip(&rule.weights) {
                let vals = el.eval_all(*x);
                let mv = mons.values(*x);
                for i in 0..el.dim() {
                    for k in 0..mons.len() {
                        m[(i, k)] += w * vals[i].1 * mv[k];
                    }
                }
            }
            assert_eq!(numerical_rank(&m, 1e-10), (s + 1) * (s + 2) / 2);
        }
    }
}

#[test]
fn interpolant_reproduces_members() {
    let e = pentagon();
    for r in 0..=3 {
        for s in s_values(r) {
            let el = build_mixed_element(&e, r, s).unwrap();
            let coeffs: Vec<f64> = (0..el.dim()).map(|i| ((i * 7 + 3) % 11) as f64 / 5.0 - 1.0).collect();
            let got = mixed_interpolant(&el, |x| el.evaluate(&coeffs, x).0).unwrap();
            for (a, b) in got.iter().zip(&coeffs) {
                assert!((a - b).abs() < 1e-9, "r={r} s={s}: {a} vs {b}");
            }
        }
    }
}

fn smooth_field(x: Point2<f64>) -> Vector2<f64> {
    use std::f64::consts::PI;
    Vector2::new(
        PI * (PI * x.x).cos() * (PI * x.y).sin(),
        PI * (PI * x.x).sin() * (PI * x.y).cos(),
    )
}

fn smooth_div(x: Point2<f64>) -> f64 {
    use std::f64::consts::PI;
    -2.0 * PI * PI * (PI * x.x).sin() * (PI * x.y).sin()
}

#[test]
fn interpolant_commutes_with_divergence() {
    let e = hexagon();
    for r in 1..=3 {
        for s in s_values(r) {
            let el = build_mixed_element(&e, r, s).unwrap();
            let c = MixedInterpolant::new(&el, 30).unwrap().project(&el, smooth_field).unwrap();
            let rule = polygon_rule(&e, 30).unwrap();
            let mons = el.monomials();
            for k in 0..mons.len() {
                let v: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| w * (el.evaluate(&c, x).1 - smooth_div(x)) * mons.values(x)[k])
                    .sum();
                assert!(v.abs() < 1e-10, "r={r} s={s} k={k}: {v:e}");
            }
        }
    }
}

#[test]
fn interpolation_error_decays_at_order_r_plus_one() {
    for r in 0..=2 {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for level in 0..3 {
            let h = 0.4 / 2f64.powi(level);
            let e = Polygon::regular(5, Point2::new(0.31, 0.22), h, 0.3).unwrap();
            let el = build_mixed_element(&e, r, r).unwrap();
            let c = mixed_interpolant(&el, smooth_field).unwrap();
            let rule = polygon_rule(&e, 2 * r + 12).unwrap();
            let err: f64 = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * (el.evaluate(&c, x).0 - smooth_field(x)).norm_squared())
                .sum();
            hs.push(h);
            errs.push((err / e.area()).sqrt());
        }
        let slope = fitted_slope(&hs, &errs);
        assert!(slope > r as f64 + 0.7, "r={r}: slope {slope}, errors {errs:?}");
    }
}

fn two_cells() -> (Polygon<f64>, Polygon<f64>) {
    // share the segment (1, 0) - (1.1, 1)
    let a = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.1, 1.0), (0.4, 1.3), (-0.2, 0.6)]).unwrap();
    let b = Polygon::from_coords(&[(1.0, 0.0), (2.0, 0.2), (2.1, 1.1), (1.1, 1.0)]).unwrap();
    (a, b)
}

#[test]
fn neighbouring_traces_agree_after_relabeling() {
    let (a, b) = two_cells();
    // edge 2 of a runs (1,0) -> (1.1,1); edge 0 of b runs (1.1,1) -> (1,0)
    for r in 0..=3 {
        let ea = build_mixed_element(&a, r, r).unwrap();
        let eb = build_mixed_element(&b, r, r).unwrap();
        let nu = a.normal(2);
        for t in [0.1, 0.45, 0.7] {
            let x = a.edge_point(2, t);
            let va = ea.eval_all(x);
            let vb = eb.eval_all(x);
            let ia = ea.index_of(MixedKind::EdgeFlux(2)).unwrap();
            let ib = eb.index_of(MixedKind::EdgeFlux(0)).unwrap();
            assert!((va[ia].0.dot(nu) + vb[ib].0.dot(nu)).abs() < 1e-10);
            for j in 1..=r {
                let ia = ea.index_of(MixedKind::EdgeMoment { edge: 2, j }).unwrap();
                let ib = eb.index_of(MixedKind::EdgeMoment { edge: 0, j: r + 1 - j }).unwrap();
                assert!((va[ia].0.dot(nu) - vb[ib].0.dot(nu)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn single_precision_element() {
    let e: Polygon<f32> = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.2, 0.8), (0.3, 1.1)]).unwrap();
    let el = build_mixed_element(&e, 1, 1).unwrap();
    assert_eq!(el.dim(), mixed_dimension(4, 1, 1));
    let (v, _) = el.eval_all(e.edge_point(0, 0.5))[0];
    assert!((v.dot(e.normal(0)) * e.edge_length(0) - 1.0).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn flux_functions_partition_unit_flux(seed in 0u64..10_000, n in 3usize..9, r in 0usize..4) {
        let mut g = rng(seed);
        let e = random_convex_polygon::<f64, _>(&mut g, n, 0.15);
        let el = build_mixed_element(&e, r, r).unwrap();
        for edge in 0..n {
            let f = fluxes(&el, edge);
            for (k, &v) in el.kinds().iter().zip(&f) {
                let expect = if *k == MixedKind::EdgeFlux(edge) { 1.0 } else { 0.0 };
                prop_assert!((v - expect).abs() < 1e-10);
            }
        }
    }
}
