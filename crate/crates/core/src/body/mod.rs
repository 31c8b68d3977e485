//! Closed convex bodies represented by exact nearest-point oracles.
//!
//! Every body answers `project(u)`, the unique nearest point to `u`; the
//! distance function is derived from it. Two derived constructions matter to
//! the solvers:
//!
//! - the epsilon-hull `A_eps`, whose distance function is `max(d(., A) - eps, 0)`;
//! - the blend `(1 - t) S^i + t C`, a Minkowski combination of a face and a
//!   body containing it.
//!
//! Blends of bodies of the form `co(G) + B(0, r)` (polytopes, faces, balls and
//! their hulls) are again of that form and are projected exactly. Anything
//! else falls back to alternating exact minimization over the two summands.

mod halfspace;
pub(crate) mod polytope;

use std::sync::Arc;

pub use halfspace::HalfspaceSet;
pub use polytope::VPolytope;

use crate::error::{Error, Result};
use crate::point::{self, Point};
use crate::simplex::Face;

/// Default slack when checking that a face lies in a body.
pub const CONTAINMENT_TOL: f64 = 1e-9;

const BLEND_MAX_ITER: usize = 10_000;
const BLEND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    VPolytope(VPolytope),
    Ball(Ball),
    Halfspaces(HalfspaceSet),
    Face(Face),
    EpsilonHull(EpsilonHull),
    Blend(Blend),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonHull {
    inner: Arc<ConvexBody>,
    eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Blend {
    t: f64,
    face: Face,
    outer: Arc<ConvexBody>,
    /// `co(generators) + B(0, radius)` when the blend has that closed form.
    closed_form: Option<(VPolytope, f64)>,
}

impl ConvexBody {
    pub fn vpolytope(generators: Vec<Point>) -> Result<Self> {
        VPolytope::new(generators).map(ConvexBody::VPolytope)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) || !point::is_finite(&center) {
            return Err(Error::InvalidParameter(format!("invalid ball radius {radius}")));
        }
        Ok(ConvexBody::Ball(Ball { center, radius }))
    }

    pub fn halfspaces(normals: Vec<Point>, offsets: Vec<f64>) -> Result<Self> {
        HalfspaceSet::new(normals, offsets).map(ConvexBody::Halfspaces)
    }

    pub fn face(face: Face) -> Self {
        ConvexBody::Face(face)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::VPolytope(p) => p.dim(),
            ConvexBody::Ball(b) => b.center.len(),
            ConvexBody::Halfspaces(h) => h.dim(),
            ConvexBody::Face(f) => f.dim(),
            ConvexBody::EpsilonHull(h) => h.inner.dim(),
            ConvexBody::Blend(b) => b.face.dim(),
        }
    }

    /// The nearest point of the body to `u`.
    pub fn project(&self, u: &Point) -> Result<Point> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        match self {
            ConvexBody::VPolytope(p) => p.project(u),
            ConvexBody::Ball(b) => Ok(project_ball(&b.center, b.radius, u)),
            ConvexBody::Halfspaces(h) => h.project(u),
            ConvexBody::Face(f) => Ok(f.project(u)),
            ConvexBody::EpsilonHull(h) => h.project(u),
            ConvexBody::Blend(b) => b.project(u),
        }
    }

    pub fn distance(&self, u: &Point) -> Result<f64> {
        match self {
            // Avoid the round trip through the nearest point where the
            // distance has a direct form.
            ConvexBody::Ball(b) => Ok((point::distance(&b.center, u) - b.radius).max(0.0)),
            ConvexBody::EpsilonHull(h) => Ok((h.inner.distance(u)? - h.eps).max(0.0)),
            _ => Ok(point::distance(u, &self.project(u)?)),
        }
    }

    /// Largest distance from a vertex of `face` to the body. Convexity makes
    /// the face a subset of the body iff this is zero.
    pub fn face_gap(&self, face: &Face) -> Result<f64> {
        let mut gap = 0.0f64;
        for v in face.vertices() {
            gap = gap.max(self.distance(v)?);
        }
        Ok(gap)
    }

    pub fn contains_face(&self, face: &Face, tol: f64) -> Result<bool> {
        Ok(self.face_gap(face)? <= tol)
    }

    /// Points known to lie in the body, used to probe containment in other
    /// bodies. Halfspace sets have no cheap representatives and yield none.
    pub fn probe_points(&self) -> Vec<Point> {
        match self {
            ConvexBody::VPolytope(p) => p.generators().to_vec(),
            ConvexBody::Ball(b) => {
                let mut pts = vec![b.center.clone()];
                for k in 0..b.center.len() {
                    for sign in [-1.0, 1.0] {
                        let mut p = b.center.clone();
                        p[k] += sign * b.radius;
                        pts.push(p);
                    }
                }
                pts
            }
            ConvexBody::Halfspaces(_) => Vec::new(),
            ConvexBody::Face(f) => f.vertices().to_vec(),
            ConvexBody::EpsilonHull(h) => h.inner.probe_points(),
            ConvexBody::Blend(b) => {
                let outer = b.outer.probe_points();
                let mut pts = Vec::new();
                for f in b.face.vertices() {
                    for c in &outer {
                        pts.push(f * (1.0 - b.t) + c * b.t);
                    }
                }
                pts
            }
        }
    }

    /// `co(G) + B(0, r)` representation, when the body has one.
    fn polytope_plus_ball(&self) -> Option<(Vec<Point>, f64)> {
        match self {
            ConvexBody::VPolytope(p) => Some((p.generators().to_vec(), 0.0)),
            ConvexBody::Face(f) => Some((f.vertices().to_vec(), 0.0)),
            ConvexBody::Ball(b) => Some((vec![b.center.clone()], b.radius)),
            ConvexBody::EpsilonHull(h) => {
                h.inner.polytope_plus_ball().map(|(g, r)| (g, r + h.eps))
            }
            ConvexBody::Blend(b) => b
                .closed_form
                .as_ref()
                .map(|(p, r)| (p.generators().to_vec(), *r)),
            ConvexBody::Halfspaces(_) => None,
        }
    }
}

fn project_ball(center: &Point, radius: f64, u: &Point) -> Point {
    let offset = u - center;
    let d = offset.norm();
    if d <= radius {
        u.clone()
    } else {
        center + offset * (radius / d)
    }
}

/// The set of points within `eps` of `body`.
pub fn epsilon_hull(body: ConvexBody, eps: f64) -> Result<ConvexBody> {
    epsilon_hull_arc(Arc::new(body), eps)
}

pub fn epsilon_hull_arc(body: Arc<ConvexBody>, eps: f64) -> Result<ConvexBody> {
    if eps < 0.0 || eps.is_nan() {
        return Err(Error::NegativeEpsilon(eps));
    }
    Ok(ConvexBody::EpsilonHull(EpsilonHull { inner: body, eps }))
}

impl EpsilonHull {
    pub fn inner(&self) -> &ConvexBody {
        &self.inner
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn project(&self, u: &Point) -> Result<Point> {
        let p = self.inner.project(u)?;
        let d = point::distance(u, &p);
        if d <= self.eps {
            Ok(u.clone())
        } else {
            Ok(&p + (u - &p) * (self.eps / d))
        }
    }
}

/// The Minkowski combination `(1 - t) face + t outer`.
///
/// Requires `face` to lie in `outer` (checked at its vertices).
pub fn blend(face: Face, outer: ConvexBody, t: f64) -> Result<ConvexBody> {
    blend_arc(face, Arc::new(outer), t, CONTAINMENT_TOL)
}

pub fn blend_arc(face: Face, outer: Arc<ConvexBody>, t: f64, tol: f64) -> Result<ConvexBody> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("blend parameter {t} outside [0, 1]")));
    }
    if outer.dim() != face.dim() {
        return Err(Error::DimensionMismatch { expected: face.dim(), got: outer.dim() });
    }
    let gap = outer.face_gap(&face)?;
    if gap > tol {
        return Err(Error::FaceNotContained { face: face.omitted_index(), distance: gap });
    }
    let closed_form = match outer.polytope_plus_ball() {
        Some((gens, radius)) => {
            let mut mixed = Vec::with_capacity(gens.len() * face.vertices().len());
            for f in face.vertices() {
                for g in &gens {
                    mixed.push(f * (1.0 - t) + g * t);
                }
            }
            Some((VPolytope::new(mixed)?, radius * t))
        }
        None => None,
    };
    Ok(ConvexBody::Blend(Blend { t, face, outer, closed_form }))
}

impl Blend {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn face(&self) -> &Face {
        &self.face
    }

    pub fn outer(&self) -> &ConvexBody {
        &self.outer
    }

    fn project(&self, u: &Point) -> Result<Point> {
        if self.t == 0.0 {
            return Ok(self.face.project(u));
        }
        if self.t == 1.0 {
            return self.outer.project(u);
        }
        match &self.closed_form {
            Some((poly, radius)) => {
                let p = poly.project(u)?;
                let d = point::distance(u, &p);
                if d <= *radius {
                    Ok(u.clone())
                } else {
                    Ok(&p + (u - &p) * (radius / d))
                }
            }
            None => self.project_alternating(u),
        }
    }

    /// Minimizes `||u - (1-t)s - t c||` over `s` in the face and `c` in the
    /// outer body by exact alternating minimization in `s` and `c`.
    ///
    /// Valid for any outer body; `project` prefers the closed form when one
    /// exists.
    pub fn project_alternating(&self, u: &Point) -> Result<Point> {
        let t = self.t;
        if t == 0.0 {
            return Ok(self.face.project(u));
        }
        if t == 1.0 {
            return self.outer.project(u);
        }
        let mut c = self.outer.project(u)?;
        let mut s = self.face.project(u);
        let mut x = &s * (1.0 - t) + &c * t;
        let mut residual = f64::INFINITY;
        for _ in 0..BLEND_MAX_ITER {
            s = self.face.project(&((u - &c * t) / (1.0 - t)));
            c = self.outer.project(&((u - &s * (1.0 - t)) / t))?;
            let next = &s * (1.0 - t) + &c * t;
            residual = point::distance(&next, &x);
            x = next;
            if residual <= BLEND_TOL {
                return Ok(x);
            }
        }
        Err(Error::NonConvergence { iterations: BLEND_MAX_ITER, residual })
    }
}
