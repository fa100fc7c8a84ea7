use proptest::prelude::*;

use equilibria::bounds::{bound_central, bound_maxwell_general, bound_newton, bound_sinr};
use equilibria::classify::classify_point;
use equilibria::linalg::{distance, Matrix};
use equilibria::model::{
    central_jacobian, central_residual, central_residual_flat, eval_sinr, grad_maxwell, hessian_maxwell,
    CentralConfig, MassConvention, MaxwellConfig, Point, SinrConfig,
};
use equilibria::polysys::{build_maxwell_even, build_sinr, sinr_fraction};
use equilibria::solve::{central_signature, solve_central, SolverSettings};
use equilibria::ProblemConfig;

/// Rotation of `R^3` from three angles.
fn rotation3(a: f64, b: f64, c: f64) -> Matrix<f64> {
    let rz = |t: f64| Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) | (1, 1) => t.cos(),
        (0, 1) => -t.sin(),
        (1, 0) => t.sin(),
        (2, 2) => 1.0,
        _ => 0.0,
    });
    let rx = |t: f64| Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (1, 1) | (2, 2) => t.cos(),
        (1, 2) => -t.sin(),
        (2, 1) => t.sin(),
        (0, 0) => 1.0,
        _ => 0.0,
    });
    rz(a).matmul(&rx(b)).matmul(&rz(c))
}

fn well_separated(pts: &[Vec<f64>], gap: f64) -> bool {
    pts.iter().enumerate().all(|(i, a)| pts[i + 1..].iter().all(|b| distance(a, b) >= gap))
}

fn points3(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), n)
}

fn charges(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-2.0f64..-0.2, 0.2f64..2.0], n)
}

fn maxwell3(sites: &[Vec<f64>], q: &[f64], m: u32) -> MaxwellConfig<f64> {
    MaxwellConfig::new(3, sites.iter().cloned().map(Point::new).collect(), q.to_vec(), m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_is_rotation_equivariant(
        sites in points3(3), q in charges(3), p in prop::collection::vec(-3.0f64..3.0, 3),
        m in 0u32..5, a in 0.0f64..6.3, b in 0.0f64..3.1, c in 0.0f64..6.3,
    ) {
        prop_assume!(well_separated(&sites, 0.3) && sites.iter().all(|s| distance(s, &p) > 0.3));
        let rot = rotation3(a, b, c);
        let cfg = maxwell3(&sites, &q, m);
        let turned: Vec<Vec<f64>> = sites.iter().map(|s| rot.mul_vec(s)).collect();
        let g = rot.mul_vec(&grad_maxwell(&cfg, &p).unwrap());
        let g2 = grad_maxwell(&maxwell3(&turned, &q, m), &rot.mul_vec(&p)).unwrap();
        let top = g.iter().fold(1e-300f64, |t, v| t.max(v.abs()));
        for (x, y) in g.iter().zip(&g2) {
            prop_assert!((x - y).abs() <= 1e-10 * top.max(1.0));
        }
    }

    #[test]
    fn hessian_spectrum_is_rotation_invariant(
        sites in points3(3), q in charges(3), p in prop::collection::vec(-3.0f64..3.0, 3),
        m in 0u32..4, a in 0.0f64..6.3, b in 0.0f64..3.1, c in 0.0f64..6.3,
    ) {
        prop_assume!(well_separated(&sites, 0.3) && sites.iter().all(|s| distance(s, &p) > 0.3));
        let rot = rotation3(a, b, c);
        let turned: Vec<Vec<f64>> = sites.iter().map(|s| rot.mul_vec(s)).collect();
        let e1 = classify_point(&ProblemConfig::Maxwell(maxwell3(&sites, &q, m)), &p).unwrap().eigenvalues;
        let e2 = classify_point(&ProblemConfig::Maxwell(maxwell3(&turned, &q, m)), &rot.mul_vec(&p)).unwrap().eigenvalues;
        let top = e1.iter().fold(0.0f64, |t, v| t.max(v.abs()));
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert!((x - y).abs() <= 1e-8 * top);
        }
    }

    #[test]
    fn critical_exponent_potential_is_harmonic(
        sites in points3(4), q in charges(4), p in prop::collection::vec(-3.0f64..3.0, 3),
    ) {
        prop_assume!(well_separated(&sites, 0.3) && sites.iter().all(|s| distance(s, &p) > 0.3));
        let h = hessian_maxwell(&maxwell3(&sites, &q, 1), &p).unwrap();
        let trace = h[(0, 0)] + h[(1, 1)] + h[(2, 2)];
        prop_assert!(trace.abs() <= 1e-10 * h.max_abs().max(1.0));
    }

    #[test]
    fn central_residual_is_rotation_equivariant(
        x in points3(3), masses in prop::collection::vec(0.2f64..3.0, 3),
        a in 0.0f64..6.3, b in 0.0f64..3.1, c in 0.0f64..6.3,
    ) {
        prop_assume!(well_separated(&x, 0.2));
        let rot = rotation3(a, b, c);
        let cfg = CentralConfig::new(3, masses, MassConvention::Standard).unwrap();
        let bodies: Vec<Point<f64>> = x.iter().cloned().map(Point::new).collect();
        let turned: Vec<Point<f64>> = x.iter().map(|v| Point::new(rot.mul_vec(v))).collect();
        let r1 = central_residual(&cfg, &bodies).unwrap();
        let r2 = central_residual(&cfg, &turned).unwrap();
        for (u, v) in r1.iter().zip(&r2) {
            for (s, t) in rot.mul_vec(u).iter().zip(v) {
                prop_assert!((s - t).abs() < 1e-9 * (1.0 + s.abs()));
            }
        }
    }

    #[test]
    fn sinr_matches_its_fraction(
        sites in points3(3), w in prop::collection::vec(0.2f64..3.0, 3),
        p in prop::collection::vec(-3.0f64..3.0, 3), noise in 0.0f64..2.0, alpha in 1u32..4,
    ) {
        prop_assume!(well_separated(&sites, 0.3) && sites.iter().all(|s| distance(s, &p) > 0.3));
        let cfg = SinrConfig::new(3, sites.into_iter().map(Point::new).collect(), w, 2 * alpha, noise, 1, None).unwrap();
        let (fp, gp) = sinr_fraction(&cfg).unwrap();
        let (f, g) = (fp.eval(&p).unwrap(), gp.eval(&p).unwrap());
        let s = eval_sinr(&cfg, &p).unwrap();
        // relative to the term magnitudes of the expanded polynomials
        let scale = fp.eval_abs(&p).unwrap() + s * gp.eval_abs(&p).unwrap();
        prop_assert!((s * g - f).abs() <= 1e-10 * scale);
    }

    #[test]
    fn position_system_is_translation_invariant(
        sites in points3(3), q in charges(3), p in prop::collection::vec(-3.0f64..3.0, 3),
        shift in prop::collection::vec(-5.0f64..5.0, 3), half_m in 0u32..3,
    ) {
        prop_assume!(well_separated(&sites, 0.3));
        let moved: Vec<Vec<f64>> = sites.iter().map(|s| s.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let pm: Vec<f64> = p.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let a = build_maxwell_even(&maxwell3(&sites, &q, 2 * half_m)).unwrap();
        let b = build_maxwell_even(&maxwell3(&moved, &q, 2 * half_m)).unwrap();
        let (va, vb) = (a.eval(&p).unwrap(), b.eval(&pm).unwrap());
        let scale = a.polys().iter().zip(b.polys())
            .map(|(pa, pb)| pa.eval_abs(&p).unwrap().max(pb.eval_abs(&pm).unwrap()))
            .fold(1e-300, f64::max);
        for (x, y) in va.iter().zip(&vb) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn signature_survives_rotation(x in prop::collection::vec(-2.0f64..2.0, 8), t in 0.0f64..6.3) {
        let rotated: Vec<f64> = x.chunks(2).flat_map(|p| [t.cos() * p[0] - t.sin() * p[1], t.sin() * p[0] + t.cos() * p[1]]).collect();
        let a = central_signature(4, 2, &x, 1.0);
        let b = central_signature(4, 2, &rotated, 1.0);
        prop_assert_eq!(a.orientation, b.orientation);
        for (u, v) in a.distances.iter().chain(&a.norms).zip(b.distances.iter().chain(&b.norms)) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }
}

#[test]
fn central_jacobian_matches_finite_differences() {
    let cfg = CentralConfig::new(2, vec![1.0, 2.0, 0.5], MassConvention::Standard).unwrap();
    let x = [0.3f64, -0.2, 1.1, 0.4, -0.6, 0.9];
    let jac = central_jacobian(&cfg, &x).unwrap();
    let h = 1e-6;
    for k in 0..x.len() {
        let (mut a, mut b) = (x.to_vec(), x.to_vec());
        a[k] += h;
        b[k] -= h;
        let (ra, rb) = (central_residual_flat(&cfg, &a).unwrap(), central_residual_flat(&cfg, &b).unwrap());
        for j in 0..x.len() {
            let fd = (ra[j] - rb[j]) / (2.0 * h);
            assert!((fd - jac[(j, k)]).abs() < 1e-6 * jac.max_abs(), "{j},{k}: {fd} vs {}", jac[(j, k)]);
        }
    }
}

#[test]
fn sinr_without_noise_two_stations_vanishes_only_at_sites() {
    // ∂f g - f ∂g ∝ r1^{α-2} r2^{α-2} ((p - x2) r1² - (p - x1) r2²)
    let sites = vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])];
    for alpha in [2u32, 4] {
        let cfg = SinrConfig::new(2, sites.clone(), vec![1.0, 2.0], alpha, 0.0, 0, None).unwrap();
        let sys = build_sinr(&cfg).unwrap();
        let mut zero_points = Vec::new();
        for i in -40..=40 {
            for j in -40..=40 {
                let p = [i as f64 / 16.0, j as f64 / 16.0];
                if sites.iter().any(|s| distance(s, &p) < 1e-9) {
                    continue;
                }
                if sys.relative_residual(&p).unwrap() < 1e-12 {
                    zero_points.push(p);
                }
            }
        }
        assert!(zero_points.is_empty(), "{zero_points:?}");
        for s in &sites {
            assert!(sys.eval(s).unwrap().iter().all(|v| v.abs() < 1e-15));
        }
    }
}

#[test]
fn bounds_are_monotone_on_the_grid() {
    for n in 1..=6u64 {
        for d in 1..=4u64 {
            for m in 0..8u64 {
                let v = |n, m, d| bound_maxwell_general(n, m, d).unwrap().value;
                assert!(v(n, m, d) <= v(n + 1, m, d) && v(n, m, d) <= v(n, m + 1, d) && v(n, m, d) <= v(n, m, d + 1));
            }
            for alpha in [2u64, 4, 6] {
                let v = |n, a, d| bound_sinr(n, a, d).unwrap().value;
                assert!(v(n, alpha, d) <= v(n + 1, alpha, d) && v(n, alpha, d) <= v(n, alpha + 2, d));
                assert!(v(n, alpha, d) <= v(n, alpha, d + 1));
            }
            let v = |n, d| bound_newton(n, d).unwrap().value;
            assert!(v(n, d) <= v(n + 1, d) && v(n, d) <= v(n, d + 1));
            if n >= 2 {
                let v = |n, d| bound_central(n, d).unwrap().value;
                assert!(v(n, d) <= v(n + 1, d) && v(n, d) <= v(n, d + 1));
            }
        }
    }
}

#[test]
fn unequal_masses_paper_convention_still_solves() {
    let cfg = CentralConfig::new(1, vec![1.0, 3.0], MassConvention::AsWritten).unwrap();
    let rep = solve_central(&cfg, &SolverSettings::for_problem(&ProblemConfig::Central(cfg.clone()))).unwrap();
    assert!(rep.bound.value.admits(rep.count));
    for p in &rep.points {
        let r = central_residual_flat(&cfg, &p.location).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-10));
    }
}
