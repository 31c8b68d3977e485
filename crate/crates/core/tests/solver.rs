use std::time::Instant;

use approx::assert_abs_diff_eq;
use equispace::equispace::{compare, is_hfamily, solve, supinf_check, HFamily};
use equispace::feasibility::{min_max_distance, BisectionOptions, FeasibilityStatus};
use equispace::fixtures::*;
use equispace::grid::{equispace_locus, BaryGrid};
use equispace::point;
use equispace::Simplex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

/// Incenter and inradius of a triangle from side lengths; independent of
/// the projection machinery.
fn incenter(s: &Simplex) -> (equispace::Point, f64) {
    let v = s.vertices();
    let side = |i: usize| point::distance(&v[(i + 1) % 3], &v[(i + 2) % 3]);
    let (a, b, c) = (side(0), side(1), side(2));
    let p = a + b + c;
    let center = (&v[0] * a + &v[1] * b + &v[2] * c) / p;
    let half = p / 2.0;
    let area = (half * (half - a) * (half - b) * (half - c)).sqrt();
    (center, area / half)
}

#[test]
fn incenter_of_corner_triangle() {
    let s = Simplex::corner(2);
    let (center, r) = incenter(&s);
    assert_abs_diff_eq!(r, (2.0 - 2f64.sqrt()) / 2.0, epsilon = 1e-15);
    let fam = HFamily::new(s.clone(), faces_family(&s)).unwrap();
    let started = Instant::now();
    let res = solve(&fam, TOL).unwrap();
    eprintln!("corner triangle: {:?}, {} cycles", started.elapsed(), res.iterations);
    assert_abs_diff_eq!(res.eps0, r, epsilon = 1e-6);
    assert!((&res.v - &center).norm() < 1e-5);
    for d in &res.distances {
        assert!((d - res.eps0).abs() <= 2.0 * TOL);
    }
}

#[test]
fn incenter_of_random_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let s = random_simplex(&mut rng, 2);
        let (center, r) = incenter(&s);
        let res = solve(&HFamily::new(s.clone(), faces_family(&s)).unwrap(), TOL).unwrap();
        assert_abs_diff_eq!(res.eps0, r, epsilon = 1e-6);
        assert!((&res.v - &center).norm() < 1e-5);
    }
}

#[test]
fn subdivision_covers() {
    for n in 1..=3 {
        let s = Simplex::corner(n);
        let fam = HFamily::new(s.clone(), subdivision_family(&s)).unwrap();
        let started = Instant::now();
        let res = solve(&fam, TOL).unwrap();
        eprintln!("subdivision n={n}: {:?}", started.elapsed());
        assert!(res.covering);
        assert!(res.eps0 <= TOL);
        assert!(res.distances.iter().all(|&d| d <= TOL), "{:?}", res.distances);
        assert!(!is_hfamily(&fam, TOL).unwrap());
    }
    let s = Simplex::corner(2);
    let res = solve(&HFamily::new(s.clone(), subdivision_family(&s)).unwrap(), TOL).unwrap();
    assert!((&res.v - s.barycenter()).norm() < 1e-5);
}

#[test]
fn faces_only_family_is_not_covering() {
    let s = Simplex::corner(2);
    assert!(is_hfamily(&HFamily::new(s.clone(), faces_family(&s)).unwrap(), TOL).unwrap());
    let (seg, gap) = gap_family();
    assert!(is_hfamily(&HFamily::new(seg, gap).unwrap(), TOL).unwrap());
}

#[test]
fn bisection_brackets_monotonically() {
    let s = Simplex::corner(2);
    let bodies = faces_family(&s);
    let r = min_max_distance(&bodies, &s, &s.barycenter(), BisectionOptions::for_simplex(&s)).unwrap();
    let feasible = r.trace.iter().filter(|t| t.1 == FeasibilityStatus::Feasible).map(|t| t.0);
    let infeasible = r.trace.iter().filter(|t| t.1 == FeasibilityStatus::Infeasible).map(|t| t.0);
    let min_feasible = feasible.fold(f64::INFINITY, f64::min);
    let max_infeasible = infeasible.fold(0.0, f64::max);
    assert!(min_feasible >= max_infeasible);
    let worst = bodies.iter().map(|b| b.distance(&r.argmin).unwrap()).fold(0.0, f64::max);
    assert!(worst <= r.value + 2.0 * BisectionOptions::for_simplex(&s).tol);
}

#[test]
fn random_families_satisfy_solver_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        for _ in 0..3 {
            let s = random_simplex(&mut rng, n);
            let fam = HFamily::new(s.clone(), random_hfamily(&mut rng, &s)).unwrap();
            let started = Instant::now();
            let res = solve(&fam, TOL).unwrap();
            eprintln!("random n={n}: eps0={:.6} {:?} {} cycles", res.eps0, started.elapsed(), res.iterations);
            assert!(!res.covering);
            assert!(s.contains(&res.v, 1e-9));
            for d in &res.distances {
                assert!((d - res.eps0).abs() <= 2.0 * TOL, "{:?} vs {}", res.distances, res.eps0);
            }
            let u = random_point_in(&mut rng, &s);
            let at_u = fam.distances(&u).unwrap();
            // every point of S is within eps0 of some member
            assert!(at_u.iter().cloned().fold(f64::INFINITY, f64::min) <= res.eps0 + TOL);
        }
    }
}

#[test]
fn nested_intervals_order() {
    let (s, a) = gap_family();
    let d = vec![interval(0.6, 1.0), interval(0.0, 0.4)];
    let c = compare(&HFamily::new(s.clone(), a).unwrap(), &HFamily::new(s, d).unwrap(), TOL).unwrap();
    assert_abs_diff_eq!(c.eps_smaller, 0.2, epsilon = 1e-6);
    assert_abs_diff_eq!(c.eps_larger, 0.1, epsilon = 1e-6);
}

#[test]
fn faces_vs_subdivision_order() {
    let s = Simplex::corner(2);
    let faces = HFamily::new(s.clone(), faces_family(&s)).unwrap();
    let sub = HFamily::new(s.clone(), subdivision_family(&s)).unwrap();
    let c = compare(&faces, &sub, TOL).unwrap();
    assert_abs_diff_eq!(c.eps_smaller, 0.2928932188134524, epsilon = 1e-5);
    assert!(c.eps_larger <= TOL);
}

#[test]
fn supinf_matches_solver_on_triangle() {
    let s = Simplex::corner(2);
    let fam = HFamily::new(s.clone(), faces_family(&s)).unwrap();
    let (value, _) = supinf_check(&fam, 256).unwrap();
    assert_abs_diff_eq!(value, 0.2929, epsilon = 2f64.sqrt() / 256.0);
    let sub = HFamily::new(s.clone(), subdivision_family(&s)).unwrap();
    let (value, _) = supinf_check(&sub, 64).unwrap();
    assert!(value <= 2f64.sqrt() / 64.0);
}

#[test]
fn locus_clusters_around_incenter() {
    let s = Simplex::corner(2);
    let bodies = faces_family(&s);
    let grid = BaryGrid::over_simplex(&s, 128).unwrap();
    let eps0 = (2.0 - 2f64.sqrt()) / 2.0;
    let locus = equispace_locus(&s, &bodies, 128, eps0, grid.mesh()).unwrap();
    assert!(!locus.is_empty());
    assert!(point::diameter(&locus) <= 20.0 * grid.mesh());
}
