//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.
//!
//! Run with `cargo test -p equispace --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use equispace::body::{blend, epsilon_hull, ConvexBody};
use equispace::covering::{helly_criterion, CoverageOptions, FaceCoveringFamily};
use equispace::equispace::{compare, solve, HFamily};
use equispace::fixtures::*;
use equispace::grid::BaryGrid;
use equispace::homotopy::{default_samples, Homotopy, DEFAULT_UNIFORM_SAMPLES};
use equispace::point::{self, point, Point};
use equispace::{Error, Simplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: Error) -> String {
    format!("error: {e}")
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Verdict {
    check(elapsed < limit, format!("{detail}; {:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn ac1_gap_family() -> Verdict {
    let started = Instant::now();
    let (s, bodies) = gap_family();
    let r = solve(&HFamily::new(s, bodies).map_err(err)?, TOL).map_err(err)?;
    let elapsed = started.elapsed();
    let detail = format!("eps0 = {:.9}, v = {:.9}", r.eps0, r.v[0]);
    if (r.eps0 - 0.2).abs() > 1e-6 || (r.v[0] - 0.5).abs() > 1e-6 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(1), detail)
}

fn ac2_incenter() -> Verdict {
    let started = Instant::now();
    let s = Simplex::corner(2);
    let r = solve(&HFamily::new(s.clone(), faces_family(&s)).map_err(err)?, TOL).map_err(err)?;
    let elapsed = started.elapsed();
    let inradius = (2.0 - 2f64.sqrt()) / 2.0;
    // the incenter of the corner triangle is (r, r)
    let dv = (&r.v - point(&[inradius, inradius])).norm();
    let detail = format!("eps0 error {:.2e}, |v - incenter| = {:.2e}", (r.eps0 - inradius).abs(), dv);
    if (r.eps0 - inradius).abs() > 1e-5 || dv > 1e-4 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(10), detail)
}

fn ac3_subdivision() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=3 {
        for s in [Simplex::corner(n), random_simplex(&mut rng, n)] {
            let fam = HFamily::new(s.clone(), subdivision_family(&s)).map_err(err)?;
            let r = solve(&fam, TOL).map_err(err)?;
            let at_x = fam.distances(&r.v).map_err(err)?.into_iter().fold(0.0, f64::max);
            worst = worst.max(r.eps0).max(at_x);
            cases += 1;
            if r.eps0 > 1e-6 || at_x > 1e-6 || !s.contains(&r.v, 1e-9) {
                return Err(format!("n = {n}: eps0 = {:.2e}, max distance at witness {:.2e}", r.eps0, at_x));
            }
        }
    }
    Ok(format!("{cases} subdivisions, largest eps0 or witness distance {worst:.2e}"))
}

struct SuiteEntry {
    n: usize,
    eps0: f64,
    mesh: f64,
    maximin: f64,
    minimax: f64,
    locus_diameter: Option<f64>,
}

/// Random H-families for n = 1, 2, 3 with grid extrema at depth 128; the
/// locus is computed when `eps0 > 5 mesh`.
fn grid_suite() -> Result<(Vec<SuiteEntry>, Duration), String> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    for n in 1..=3 {
        for _ in 0..7 {
            let s = random_simplex(&mut rng, n);
            let bodies = random_hfamily(&mut rng, &s);
            let r = solve(&HFamily::new(s.clone(), bodies.clone()).map_err(err)?, TOL).map_err(err)?;
            let grid = BaryGrid::over_simplex(&s, 128).map_err(err)?;
            let ex = grid.extrema(&bodies).map_err(err)?;
            let locus_diameter = if r.eps0 > 5.0 * grid.mesh() {
                let locus = grid.sublevel_set(&bodies, r.eps0 + grid.mesh()).map_err(err)?;
                Some(point::diameter(&locus))
            } else {
                None
            };
            out.push(SuiteEntry {
                n,
                eps0: r.eps0,
                mesh: grid.mesh(),
                maximin: ex.maximin.value,
                minimax: ex.minimax.value,
                locus_diameter,
            });
        }
    }
    Ok((out, started.elapsed()))
}

fn ac4_minimax_identity(suite: &[SuiteEntry], elapsed: Duration) -> Verdict {
    let mut worst_gap = 0.0f64;
    let mut worst_solver = 0.0f64;
    for e in suite {
        let gap = (e.minimax - e.maximin).abs() / e.mesh;
        let solver = ((e.eps0 - e.maximin).abs().max((e.eps0 - e.minimax).abs()) - 1e-6) / e.mesh;
        worst_gap = worst_gap.max(gap);
        worst_solver = worst_solver.max(solver);
        if gap > 2.0 || solver > 1.0 {
            return Err(format!(
                "n = {}: eps0 {:.6}, maximin {:.6}, minimax {:.6}, mesh {:.6}",
                e.n, e.eps0, e.maximin, e.minimax, e.mesh
            ));
        }
    }
    let detail = format!(
        "{} families, max |minimax - maximin| = {:.3} mesh, max |eps0 - grid| - 1e-6 = {:.3} mesh",
        suite.len(),
        worst_gap,
        worst_solver
    );
    if suite.len() < 20 {
        return Err(detail);
    }
    within(elapsed, Duration::from_secs(300), detail)
}

fn ac5_uniqueness(suite: &[SuiteEntry]) -> Verdict {
    let mut used = 0;
    let mut worst = 0.0f64;
    for e in suite {
        if let Some(d) = e.locus_diameter {
            used += 1;
            worst = worst.max(d / e.mesh);
            if d > 20.0 * e.mesh {
                return Err(format!("n = {}: locus diameter {:.2} mesh", e.n, d / e.mesh));
            }
        }
    }
    check(used >= 5, format!("{used} families with eps0 > 5 mesh, largest locus diameter {worst:.2} mesh"))
}

fn ac6_monotonicity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..20 {
        let n = 1 + k % 3;
        let s = random_simplex(&mut rng, n);
        let a = random_hfamily(&mut rng, &s);
        let d = grow_family(&mut rng, &s, &a).map_err(err)?;
        let c = compare(&HFamily::new(s.clone(), a).map_err(err)?, &HFamily::new(s, d).map_err(err)?, TOL)
            .map_err(err)?;
        worst = worst.max(c.eps_larger - c.eps_smaller);
        if c.eps_larger > c.eps_smaller + 2e-6 {
            return Err(format!("pair {k}: eps(D) = {:.9} > eps(A) = {:.9}", c.eps_larger, c.eps_smaller));
        }
    }
    Ok(format!("20 nested pairs, max eps(D) - eps(A) = {worst:.2e}"))
}

fn ac7_homotopy() -> Verdict {
    let s = segment();
    let h = Homotopy::new(s, vec![interval(0.0, 1.0), interval(0.0, 1.0)]).map_err(err)?;
    let t0 = h.find_t0(TOL).map_err(err)?;
    if (t0 - 0.5).abs() > 1e-4 {
        return Err(format!("1-D t0 = {t0}"));
    }
    let curve = h.epsilon_curve_with_t0(t0, &[0.1, 0.2, 0.3, 0.4], TOL).map_err(err)?;
    for c in &curve.samples {
        if (c.eps_t - (0.5 - c.t)).abs() > 1e-4 {
            return Err(format!("1-D eps at t = {}: {}", c.t, c.eps_t));
        }
    }
    if curve.samples.len() != 4 {
        return Err(format!("1-D curve has {} samples", curve.samples.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rise = f64::NEG_INFINITY;
    let mut worst_tail = 0.0f64;
    let families = 5;
    for k in 0..families {
        let s = random_simplex(&mut rng, 2);
        let h = Homotopy::new(s.clone(), random_covering(&mut rng, &s)).map_err(err)?;
        let t0 = h.find_t0(TOL).map_err(err)?;
        let curve = h.epsilon_curve_with_t0(t0, &default_samples(t0, DEFAULT_UNIFORM_SAMPLES, TOL), TOL).map_err(err)?;
        if let Some((t, e)) = curve.failures.first() {
            return Err(format!("family {k}: solve failed at t = {t}: {e}"));
        }
        for w in curve.samples.windows(2) {
            worst_rise = worst_rise.max(w[1].eps_t - w[0].eps_t);
        }
        if !curve.is_nonincreasing(2e-6) {
            return Err(format!("family {k}: eps_t rises by {worst_rise:.2e}"));
        }
        let tail = solve(&h.family(t0 - 1e-5).map_err(err)?, TOL).map_err(err)?.eps0;
        worst_tail = worst_tail.max(tail);
        if tail > 1e-3 {
            return Err(format!("family {k}: eps at t0 - 1e-5 is {tail:.3e}"));
        }
    }
    Ok(format!(
        "1-D t0 = {t0:.7}; {families} random 2-D covers: max rise {worst_rise:.2e}, max eps(t0 - 1e-5) = {worst_tail:.2e}"
    ))
}

fn ac8_helly() -> Verdict {
    let opts = CoverageOptions::default();
    let s = segment();
    let pos = FaceCoveringFamily::new(s.clone(), vec![interval(0.5, 1.0), interval(0.0, 0.5), interval(0.2, 0.6)])
        .map_err(err)?;
    let r = helly_criterion(&pos, opts).map_err(err)?;
    match &r.witness {
        Some(w) if r.intersects && (w[0] - 0.5).abs() <= 1e-6 => {}
        _ => return Err(format!("positive fixture: {r:?}")),
    }
    let neg = FaceCoveringFamily::new(s, vec![interval(0.6, 1.0), interval(0.0, 0.4), interval(0.3, 0.7)])
        .map_err(err)?;
    let r = helly_criterion(&neg, opts).map_err(err)?;
    // zero-based {0, 1} is the subfamily {1, 2}
    if r.intersects || r.counterexample != Some(vec![0, 1]) {
        return Err(format!("negative fixture: {r:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let trials = 30;
    for k in 0..trials {
        let s = random_simplex(&mut rng, 2);
        let count = rng.random_range(3..=6);
        let (bodies, _) = random_planted_family(&mut rng, &s, count);
        let fam = FaceCoveringFamily::new(s, bodies.clone()).map_err(err)?;
        let r = helly_criterion(&fam, opts).map_err(err)?;
        let Some(w) = r.witness.filter(|_| r.intersects) else {
            return Err(format!("planted family {k} ({count} members): {:?}", r.counterexample));
        };
        for b in &bodies {
            worst = worst.max(b.distance(&w).map_err(err)?);
        }
        if worst > 1e-6 {
            return Err(format!("planted family {k}: witness residual {worst:.2e}"));
        }
    }
    Ok(format!("both 1-D fixtures; {trials} planted 2-D families, max witness residual {worst:.2e}"))
}

struct ProbeStats {
    probes: usize,
    idempotence: f64,
    expansion: f64,
    hull_law: f64,
    endpoints: f64,
}

fn probe<R: Rng>(rng: &mut R, s: &Simplex) -> Point {
    random_point_in(rng, s).map(|x| x + rng.random_range(-0.6..0.6))
}

fn probe_body<R: Rng>(rng: &mut R, s: &Simplex, body: &ConvexBody, count: usize, st: &mut ProbeStats) -> Result<(), Error> {
    for _ in 0..count {
        let (u, w) = (probe(rng, s), probe(rng, s));
        let (pu, pw) = (body.project(&u)?, body.project(&w)?);
        st.idempotence = st.idempotence.max((body.project(&pu)? - &pu).norm());
        st.expansion = st.expansion.max((&pu - &pw).norm() - (&u - &w).norm());
        st.probes += 2;
    }
    Ok(())
}

fn bodies_for_probes<R: Rng>(rng: &mut R, s: &Simplex) -> Result<Vec<ConvexBody>, Error> {
    let n = s.dim();
    let face = s.face(0)?;
    let cloud: Vec<Point> = (0..rng.random_range(2..=6)).map(|_| random_point_in(rng, s)).collect();
    let poly = ConvexBody::vpolytope(cloud)?;
    let ball = ConvexBody::ball(s.barycenter(), 0.5 * s.min_face_distance())?;
    let mut normals: Vec<Point> = Vec::new();
    let mut offsets = Vec::new();
    for (nrm, off) in s.facet_halfspaces() {
        normals.push(nrm);
        offsets.push(off);
    }
    let cut = Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    offsets.push(cut.dot(&s.barycenter()));
    normals.push(cut);
    let half = ConvexBody::halfspaces(normals, offsets)?;
    let mut cover = face.vertices().to_vec();
    cover.push(random_point_in(rng, s));
    let cover = ConvexBody::vpolytope(cover)?;
    let face_body = ConvexBody::face(face.clone());
    // a halfspace body containing the face: weight 0 at most 0.4
    let g = &s.facet_halfspaces()[0];
    let slab = ConvexBody::halfspaces(
        s.facet_halfspaces().into_iter().map(|h| h.0).chain([-g.0.clone()]).collect(),
        s.facet_halfspaces().into_iter().map(|h| h.1).chain([-g.1 + 0.4 * s.min_face_distance()]).collect(),
    )?;
    Ok(vec![
        poly.clone(),
        ball.clone(),
        half.clone(),
        face_body,
        epsilon_hull(poly, 0.05)?,
        epsilon_hull(ball, 0.03)?,
        epsilon_hull(half, 0.05)?,
        blend(face.clone(), cover, 0.4)?,
        blend(face, slab, 0.6)?,
    ])
}

fn ac9_projections() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut st = ProbeStats { probes: 0, idempotence: 0.0, expansion: f64::NEG_INFINITY, hull_law: 0.0, endpoints: 0.0 };
    let mut variants = 0;
    for n in 1..=3 {
        for _ in 0..2 {
            let s = random_simplex(&mut rng, n);
            let bodies = bodies_for_probes(&mut rng, &s).map_err(err)?;
            variants = variants.max(bodies.len());
            for b in &bodies {
                probe_body(&mut rng, &s, b, 95, &mut st).map_err(err)?;
            }
            // epsilon-hull law through the projection
            for b in &bodies[..4] {
                for eps in [0.0, 0.02, 0.1] {
                    let hull = epsilon_hull(b.clone(), eps).map_err(err)?;
                    for _ in 0..20 {
                        let u = probe(&mut rng, &s);
                        let through = (&u - hull.project(&u).map_err(err)?).norm();
                        let law = ((&u - b.project(&u).map_err(err)?).norm() - eps).max(0.0);
                        st.hull_law = st.hull_law.max((through - law).abs());
                        st.probes += 1;
                    }
                }
            }
            // blends at the endpoints, both routes
            let face = s.face(n).map_err(err)?;
            // the simplex as a V- and as an H-description both contain every face
            let (normals, offsets): (Vec<Point>, Vec<f64>) = s.facet_halfspaces().into_iter().unzip();
            let outers = [
                ConvexBody::halfspaces(normals, offsets).map_err(err)?,
                ConvexBody::vpolytope(s.vertices().to_vec()).map_err(err)?,
            ];
            for outer in outers {
                for t in [0.0, 1.0] {
                    let b = blend(face.clone(), outer.clone(), t).map_err(err)?;
                    let ConvexBody::Blend(inner) = &b else { unreachable!() };
                    for _ in 0..20 {
                        let u = probe(&mut rng, &s);
                        let expected = if t == 0.0 { face.project(&u) } else { outer.project(&u).map_err(err)? };
                        let got = b.project(&u).map_err(err)?;
                        let alt = inner.project_alternating(&u).map_err(err)?;
                        st.endpoints = st.endpoints.max((&got - &expected).norm()).max((&alt - &expected).norm());
                        st.probes += 1;
                    }
                }
            }
        }
    }
    let detail = format!(
        "{} probes over {variants} variants: idempotence {:.1e}, expansion {:.1e}, hull law {:.1e}, endpoints {:.1e}",
        st.probes, st.idempotence, st.expansion, st.hull_law, st.endpoints
    );
    check(
        st.probes >= 10_000 && st.idempotence <= 1e-8 && st.expansion <= 1e-8 && st.hull_law <= 1e-9 && st.endpoints <= 1e-9,
        detail,
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    results.push(("AC1 gap family", ac1_gap_family()));
    results.push(("AC2 incenter", ac2_incenter()));
    results.push(("AC3 subdivision covers", ac3_subdivision()));
    match grid_suite() {
        Ok((suite, elapsed)) => {
            results.push(("AC4 minimax identity", ac4_minimax_identity(&suite, elapsed)));
            results.push(("AC5 uniqueness of v", ac5_uniqueness(&suite)));
        }
        Err(e) => {
            results.push(("AC4 minimax identity", Err(e.clone())));
            results.push(("AC5 uniqueness of v", Err(e)));
        }
    }
    results.push(("AC6 monotonicity", ac6_monotonicity()));
    results.push(("AC7 homotopy", ac7_homotopy()));
    results.push(("AC8 helly criterion", ac8_helly()));
    results.push(("AC9 projection oracles", ac9_projections()));

    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
