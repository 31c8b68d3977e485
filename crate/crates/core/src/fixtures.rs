//! Reference instances and seeded random families.
//!
//! Used by the test suites and benchmarks; every random generator takes an
//! explicit RNG so runs are reproducible.

use rand::Rng;

use crate::body::ConvexBody;
use crate::error::Result;
use crate::point::{point, Point};
use crate::simplex::Simplex;

pub fn segment() -> Simplex {
    Simplex::new(vec![point(&[0.0]), point(&[1.0])]).expect("unit segment")
}

pub fn interval(a: f64, b: f64) -> ConvexBody {
    ConvexBody::vpolytope(vec![point(&[a]), point(&[b])]).expect("interval")
}

/// `A^0 = [0.7, 1]`, `A^1 = [0, 0.3]` on `[0, 1]`: `eps0 = 0.2` at `v = 0.5`.
pub fn gap_family() -> (Simplex, Vec<ConvexBody>) {
    (segment(), vec![interval(0.7, 1.0), interval(0.0, 0.3)])
}

/// The maximal faces themselves.
pub fn faces_family(s: &Simplex) -> Vec<ConvexBody> {
    s.faces().into_iter().map(ConvexBody::face).collect()
}

/// `co(S^i ∪ {b})` for the barycenter `b`: a subdivision covering `S`.
pub fn subdivision_family(s: &Simplex) -> Vec<ConvexBody> {
    cone_family(s, &s.barycenter())
}

/// `co(S^i ∪ {apex})` for an apex inside `S`.
pub fn cone_family(s: &Simplex, apex: &Point) -> Vec<ConvexBody> {
    s.faces()
        .into_iter()
        .map(|f| {
            let mut g = f.vertices().to_vec();
            g.push(apex.clone());
            ConvexBody::vpolytope(g).expect("cone")
        })
        .collect()
}

/// Uniform barycentric weights (flat Dirichlet).
pub fn random_weights<R: Rng>(rng: &mut R, parts: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..parts).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

pub fn random_point_in<R: Rng>(rng: &mut R, s: &Simplex) -> Point {
    let w = random_weights(rng, s.dim() + 1);
    s.from_barycentric(&w)
}

/// Random point of `S` whose `i`-th barycentric weight is at most `cap`.
pub fn random_point_near_face<R: Rng>(rng: &mut R, s: &Simplex, i: usize, cap: f64) -> Point {
    let mut w = random_weights(rng, s.dim() + 1);
    let li = rng.random::<f64>() * cap;
    let rest: f64 = w.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).sum();
    for (j, x) in w.iter_mut().enumerate() {
        *x = if j == i { li } else { *x / rest * (1.0 - li) };
    }
    s.from_barycentric(&w)
}

/// A perturbed corner simplex, kept well conditioned.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Simplex {
    loop {
        let vertices: Vec<Point> = Simplex::corner(n)
            .vertices()
            .iter()
            .map(|v| v.map(|x| x + 0.25 * (rng.random::<f64>() - 0.5)))
            .collect();
        if let Ok(s) = Simplex::new(vertices) {
            if s.min_face_distance() > 0.1 * s.diameter() / (n as f64 + 1.0) {
                return s;
            }
        }
    }
}

/// Polytopes `co(S^i ∪ extras)` whose extra points keep barycentric weight
/// `i` below `0.8 / (n + 1)`, so no member reaches the barycenter and the
/// family does not cover `S`.
pub fn random_hfamily<R: Rng>(rng: &mut R, s: &Simplex) -> Vec<ConvexBody> {
    let cap = 0.8 / (s.dim() as f64 + 1.0);
    s.faces()
        .into_iter()
        .map(|f| {
            let i = f.omitted_index();
            let mut g = f.vertices().to_vec();
            for _ in 0..rng.random_range(1..=3) {
                g.push(random_point_near_face(rng, s, i, cap));
            }
            ConvexBody::vpolytope(g).expect("polytope")
        })
        .collect()
}

/// Grows every member of a family from [`random_hfamily`] by further points
/// under the same weight cap, giving `A^i ⊆ D^i` with both non-covering.
pub fn grow_family<R: Rng>(rng: &mut R, s: &Simplex, family: &[ConvexBody]) -> Result<Vec<ConvexBody>> {
    let cap = 0.8 / (s.dim() as f64 + 1.0);
    family
        .iter()
        .enumerate()
        .map(|(i, body)| {
            let mut g = body.probe_points();
            for _ in 0..rng.random_range(1..=3) {
                g.push(random_point_near_face(rng, s, i, cap));
            }
            ConvexBody::vpolytope(g)
        })
        .collect()
}

/// Covering family: cones over a random apex, each widened by random points.
pub fn random_covering<R: Rng>(rng: &mut R, s: &Simplex) -> Vec<ConvexBody> {
    let apex = random_point_in(rng, s);
    s.faces()
        .into_iter()
        .map(|f| {
            let mut g = f.vertices().to_vec();
            g.push(apex.clone());
            for _ in 0..rng.random_range(0..=2) {
                g.push(random_point_in(rng, s));
            }
            ConvexBody::vpolytope(g).expect("polytope")
        })
        .collect()
}

/// `count` polytopes, each containing a maximal face and a common planted
/// point; every face is used at least once when `count > n`.
pub fn random_planted_family<R: Rng>(rng: &mut R, s: &Simplex, count: usize) -> (Vec<ConvexBody>, Point) {
    let planted = random_point_in(rng, s);
    let faces = s.faces();
    let bodies = (0..count)
        .map(|k| {
            let face = if k < faces.len() { k } else { rng.random_range(0..faces.len()) };
            let mut g = faces[face].vertices().to_vec();
            g.push(planted.clone());
            for _ in 0..rng.random_range(0..=2) {
                g.push(random_point_in(rng, s));
            }
            ConvexBody::vpolytope(g).expect("polytope")
        })
        .collect();
    (bodies, planted)
}
