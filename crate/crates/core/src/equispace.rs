//! The equally spaced point of a family `A^0..A^n` with `S^i ⊆ A^i`.
//!
//! `eps0 = min_{u in S} max_i d(u, A^i)`; the minimizer `v` is at distance
//! `eps0` from every member. When `eps0 > 0` the family does not cover the
//! simplex and `v` is unique; when `eps0 = 0` any common point of the family
//! is returned.

use std::sync::Arc;

use crate::body::{ConvexBody, CONTAINMENT_TOL};
use crate::error::{Error, Result};
use crate::feasibility::{self, BisectionOptions, DykstraOptions, FeasibilityStatus};
use crate::grid;
use crate::point::Point;
use crate::simplex::Simplex;

/// `n + 1` bodies in an n-simplex, body `i` containing face `i`.
#[derive(Debug, Clone)]
pub struct HFamily {
    ambient: Simplex,
    bodies: Vec<Arc<ConvexBody>>,
    face_gaps: Vec<f64>,
}

impl HFamily {
    pub fn new(ambient: Simplex, bodies: Vec<ConvexBody>) -> Result<Self> {
        Self::with_tol(ambient, bodies, CONTAINMENT_TOL)
    }

    /// Builds the family, checking face containment at the face vertices.
    pub fn with_tol(ambient: Simplex, bodies: Vec<ConvexBody>, tol: f64) -> Result<Self> {
        Self::from_shared(ambient, bodies.into_iter().map(Arc::new).collect(), tol)
    }

    pub fn from_shared(ambient: Simplex, bodies: Vec<Arc<ConvexBody>>, tol: f64) -> Result<Self> {
        let expected = ambient.dim() + 1;
        if bodies.len() != expected {
            return Err(Error::InvalidFamily(format!(
                "expected {expected} bodies, got {}",
                bodies.len()
            )));
        }
        let mut face_gaps = Vec::with_capacity(expected);
        for (i, body) in bodies.iter().enumerate() {
            if body.dim() != ambient.dim() {
                return Err(Error::DimensionMismatch { expected: ambient.dim(), got: body.dim() });
            }
            let gap = body.face_gap(&ambient.face(i)?)?;
            if gap > tol {
                return Err(Error::FaceNotContained { face: i, distance: gap });
            }
            face_gaps.push(gap);
        }
        Ok(Self { ambient, bodies, face_gaps })
    }

    pub fn ambient(&self) -> &Simplex {
        &self.ambient
    }

    pub fn bodies(&self) -> Vec<ConvexBody> {
        self.bodies.iter().map(|b| (**b).clone()).collect()
    }

    pub fn shared_bodies(&self) -> &[Arc<ConvexBody>] {
        &self.bodies
    }

    /// Largest vertex distance from face `i` to body `i`, per `i`.
    pub fn face_gaps(&self) -> &[f64] {
        &self.face_gaps
    }

    pub fn distances(&self, u: &Point) -> Result<Vec<f64>> {
        self.bodies.iter().map(|b| b.distance(u)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquispaceResult {
    pub eps0: f64,
    pub v: Point,
    /// `d(v, A^i)` per body.
    pub distances: Vec<f64>,
    /// `eps0 <= tol`: the family covers the simplex.
    pub covering: bool,
    /// Dykstra cycles over all bisection probes.
    pub iterations: usize,
    pub bisection_steps: usize,
}

/// Solver knobs derived from the requested tolerance on `eps0`.
fn bisection_options(tol: f64) -> BisectionOptions {
    BisectionOptions {
        // A narrower internal bracket leaves room for the witness residual.
        tol: tol / 4.0,
        dykstra: DykstraOptions {
            feas_tol: feasibility::DEFAULT_FEAS_TOL.min(tol / 10.0),
            max_iter: feasibility::DEFAULT_MAX_ITER,
        },
    }
}

/// Computes `eps0` and the equally spaced point `v` to within `tol`.
pub fn solve(fam: &HFamily, tol: f64) -> Result<EquispaceResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let bodies = fam.bodies();
    let start = fam.ambient.barycenter();
    let mm = feasibility::min_max_distance(&bodies, &fam.ambient, &start, bisection_options(tol))?;
    let distances = fam.distances(&mm.argmin)?;
    Ok(EquispaceResult {
        eps0: mm.value,
        v: mm.argmin,
        distances,
        covering: mm.value <= tol,
        iterations: mm.iterations,
        bisection_steps: mm.trace.len(),
    })
}

/// True iff the family leaves part of the simplex uncovered (`eps0 > tol`).
///
/// Decided by a single intersection test of the `tol`-hulls rather than a
/// full solve.
pub fn is_hfamily(fam: &HFamily, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let start = fam.ambient.barycenter();
    let report =
        feasibility::intersect_hulls(&fam.bodies, tol, 0.0, &fam.ambient, &start, bisection_options(tol).dykstra)?;
    match report.status {
        FeasibilityStatus::Feasible => Ok(false),
        FeasibilityStatus::Infeasible => Ok(true),
        FeasibilityStatus::Undecided => {
            Err(Error::NonConvergence { iterations: report.iterations, residual: report.residual })
        }
    }
}

/// Grid estimate of `sup_{u in S} min_i d(u, A^i)` and where it is attained.
pub fn supinf_check(fam: &HFamily, grid_depth: usize) -> Result<(f64, Point)> {
    let g = grid::grid_maximin(&fam.ambient, &fam.bodies(), grid_depth)?;
    Ok((g.value, g.point))
}

/// `eps0` of a family and of a family containing it member by member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub eps_smaller: f64,
    pub eps_larger: f64,
}

/// Solves `smaller` and `larger` (with `A^i ⊆ D^i`, probed at the points
/// representing each `A^i`) and checks that enlarging the sets cannot
/// increase `eps0`.
pub fn compare(smaller: &HFamily, larger: &HFamily, tol: f64) -> Result<Comparison> {
    if smaller.ambient != larger.ambient {
        return Err(Error::InvalidFamily("families live in different simplices".into()));
    }
    for (i, (a, d)) in smaller.bodies.iter().zip(&larger.bodies).enumerate() {
        for p in a.probe_points() {
            let dist = d.distance(&p)?;
            if dist > tol {
                return Err(Error::ContainmentViolated { body: i, distance: dist });
            }
        }
    }
    let eps_smaller = solve(smaller, tol)?.eps0;
    let eps_larger = solve(larger, tol)?.eps0;
    if eps_larger > eps_smaller + 2.0 * tol {
        return Err(Error::OrderingViolated { smaller: eps_smaller, larger: eps_larger });
    }
    Ok(Comparison { eps_smaller, eps_larger })
}
