//! Coverage predicates and the two covering corollaries for face covering
//! families (families whose members each contain a maximal face).
//!
//! Coverage is decided on barycentric grids: a set list "covers" a simplex
//! (or facet) when every grid point is within `mesh + tol` of some member.

use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use crate::body::{ConvexBody, CONTAINMENT_TOL};
use crate::equispace::{self, HFamily};
use crate::error::{Error, Result};
use crate::feasibility::{self, DykstraOptions, FeasibilityStatus};
use crate::grid::{composition_count, BaryGrid};
use crate::point::Point;
use crate::simplex::Simplex;

/// Largest number of `(n+1)`-subfamilies the Helly check will enumerate.
pub const ENUMERATION_CAP: u128 = 1_000_000;
pub const DEFAULT_GRID_DEPTH: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageOptions {
    pub grid_depth: usize,
    pub tol: f64,
    /// For `n + 1` bodies with one face each, also run the exact solver.
    pub cross_check: bool,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        Self { grid_depth: DEFAULT_GRID_DEPTH, tol: 1e-6, cross_check: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub covered: bool,
    /// Mesh of the grid used (largest facet mesh for boundary checks).
    pub mesh: f64,
    /// Largest grid distance to the nearest member.
    pub value: f64,
    /// Worst grid point when not covered.
    pub witness_uncovered: Option<Point>,
    /// Verdict of the exact solver, when it applied.
    pub solver_covered: Option<bool>,
}

fn check_bodies(ambient: &Simplex, bodies: &[ConvexBody]) -> Result<()> {
    if bodies.is_empty() {
        return Err(Error::InvalidParameter("coverage needs at least one body".into()));
    }
    for b in bodies {
        if b.dim() != ambient.dim() {
            return Err(Error::DimensionMismatch { expected: ambient.dim(), got: b.dim() });
        }
    }
    Ok(())
}

/// Whether `bodies` cover the simplex, up to the grid mesh plus `tol`.
pub fn covers_simplex(ambient: &Simplex, bodies: &[ConvexBody], opts: CoverageOptions) -> Result<CoverageReport> {
    check_bodies(ambient, bodies)?;
    let grid = BaryGrid::over_simplex(ambient, opts.grid_depth)?;
    let best = grid.extrema(bodies)?.maximin;
    let covered = best.value <= grid.mesh() + opts.tol;
    let solver_covered = if opts.cross_check && bodies.len() == ambient.dim() + 1 {
        match face_matching(ambient, bodies, CONTAINMENT_TOL)? {
            Some(order) => {
                let ordered = order.iter().map(|&j| bodies[j].clone()).collect();
                let fam = HFamily::new(ambient.clone(), ordered)?;
                Some(!equispace::is_hfamily(&fam, opts.tol)?)
            }
            None => None,
        }
    } else {
        None
    };
    Ok(CoverageReport {
        covered,
        mesh: grid.mesh(),
        value: best.value,
        witness_uncovered: (!covered).then_some(best.point),
        solver_covered,
    })
}

/// Whether `bodies` cover every facet of the simplex, each checked on its
/// own barycentric grid.
pub fn covers_boundary(ambient: &Simplex, bodies: &[ConvexBody], opts: CoverageOptions) -> Result<CoverageReport> {
    check_bodies(ambient, bodies)?;
    let mut worst: Option<(f64, Point)> = None;
    let mut covered = true;
    let mut mesh = 0.0f64;
    for face in ambient.faces() {
        let grid = BaryGrid::new(face.vertices().to_vec(), opts.grid_depth)?;
        let best = grid.extrema(bodies)?.maximin;
        mesh = mesh.max(grid.mesh());
        if best.value > grid.mesh() + opts.tol {
            covered = false;
        }
        if worst.as_ref().is_none_or(|w| best.value > w.0) {
            worst = Some((best.value, best.point));
        }
    }
    let (value, point) = worst.expect("simplex has facets");
    Ok(CoverageReport {
        covered,
        mesh,
        value,
        witness_uncovered: (!covered).then_some(point),
        solver_covered: None,
    })
}

/// Assigns each face to a distinct body containing it, if possible.
/// Returns `order` with `order[i]` the body for face `i`.
fn face_matching(ambient: &Simplex, bodies: &[ConvexBody], tol: f64) -> Result<Option<Vec<usize>>> {
    let contains = containment_table(ambient, bodies, tol)?;
    Ok(perfect_matching(&contains, ambient.dim() + 1))
}

/// `table[alpha]` lists the faces body `alpha` contains.
fn containment_table(ambient: &Simplex, bodies: &[ConvexBody], tol: f64) -> Result<Vec<Vec<usize>>> {
    let faces = ambient.faces();
    bodies
        .iter()
        .map(|b| {
            let mut inside = Vec::new();
            for f in &faces {
                if b.contains_face(f, tol)? {
                    inside.push(f.omitted_index());
                }
            }
            Ok(inside)
        })
        .collect()
}

/// Bipartite matching of faces to distinct bodies by augmenting paths.
fn perfect_matching(contains: &[Vec<usize>], faces: usize) -> Option<Vec<usize>> {
    fn augment(face: usize, contains: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for (body, list) in contains.iter().enumerate() {
            if !list.contains(&face) || seen[body] {
                continue;
            }
            seen[body] = true;
            if owner[body].is_none_or(|other| augment(other, contains, owner, seen)) {
                owner[body] = Some(face);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; contains.len()];
    for face in 0..faces {
        let mut seen = vec![false; contains.len()];
        if !augment(face, contains, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut order = vec![0; faces];
    for (body, f) in owner.iter().enumerate() {
        if let Some(f) = f {
            order[*f] = body;
        }
    }
    Some(order)
}

/// A finite family of convex bodies in a simplex together with a choice of
/// member for each maximal face it contains.
#[derive(Debug, Clone)]
pub struct FaceCoveringFamily {
    ambient: Simplex,
    bodies: Vec<Arc<ConvexBody>>,
    contains: Vec<Vec<usize>>,
    assignment: Vec<Option<usize>>,
}

impl FaceCoveringFamily {
    /// Computes which faces each body contains and assigns faces to
    /// distinct bodies when possible (otherwise to the first body
    /// containing them).
    pub fn new(ambient: Simplex, bodies: Vec<ConvexBody>) -> Result<Self> {
        check_bodies(&ambient, &bodies)?;
        let contains = containment_table(&ambient, &bodies, CONTAINMENT_TOL)?;
        let faces = ambient.dim() + 1;
        let assignment = match perfect_matching(&contains, faces) {
            Some(order) => order.into_iter().map(Some).collect(),
            None => (0..faces)
                .map(|f| contains.iter().position(|list| list.contains(&f)))
                .collect(),
        };
        Ok(Self { ambient, bodies: bodies.into_iter().map(Arc::new).collect(), contains, assignment })
    }

    /// Uses the given face-to-body map (zero-based), checking containment.
    pub fn with_assignment(ambient: Simplex, bodies: Vec<ConvexBody>, assignment: Vec<Option<usize>>) -> Result<Self> {
        let mut fam = Self::new(ambient, bodies)?;
        if assignment.len() != fam.ambient.dim() + 1 {
            return Err(Error::DimensionMismatch { expected: fam.ambient.dim() + 1, got: assignment.len() });
        }
        for (face, body) in assignment.iter().enumerate() {
            if let Some(b) = *body {
                let member = fam.bodies.get(b).ok_or(Error::IndexOutOfRange { index: b, len: fam.bodies.len() })?;
                let gap = member.face_gap(&fam.ambient.face(face)?)?;
                if gap > CONTAINMENT_TOL {
                    return Err(Error::FaceNotContained { face, distance: gap });
                }
            }
        }
        fam.assignment = assignment;
        Ok(fam)
    }

    pub fn ambient(&self) -> &Simplex {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn bodies(&self) -> Vec<ConvexBody> {
        self.bodies.iter().map(|b| (**b).clone()).collect()
    }

    /// Faces contained in each body.
    pub fn contained_faces(&self) -> &[Vec<usize>] {
        &self.contains
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// Every member contains at least one maximal face.
    pub fn is_face_covering(&self) -> bool {
        self.contains.iter().all(|c| !c.is_empty())
    }

    fn subset(&self, indices: &[usize]) -> Vec<ConvexBody> {
        indices.iter().map(|&i| (*self.bodies[i]).clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommonDistancePoint {
    pub v: Point,
    pub eps0: f64,
    /// `d(v, B^alpha)` for every member.
    pub distances: Vec<f64>,
}

/// The common equally spaced point of a face covering family with at least
/// `n + 2` members: solved on the assigned `(n+1)`-subfamily, then verified
/// against every other member.
pub fn common_distance_point(fam: &FaceCoveringFamily, tol: f64) -> Result<CommonDistancePoint> {
    let n = fam.ambient.dim();
    if fam.len() < n + 2 {
        return Err(Error::InvalidFamily(format!("need at least {} members, got {}", n + 2, fam.len())));
    }
    let chosen: Vec<usize> = fam
        .assignment
        .iter()
        .enumerate()
        .map(|(face, a)| a.ok_or_else(|| Error::InvalidFamily(format!("face {face} is in no member"))))
        .collect::<Result<_>>()?;
    let shared = chosen.iter().map(|&i| Arc::clone(&fam.bodies[i])).collect();
    let sub = HFamily::from_shared(fam.ambient.clone(), shared, CONTAINMENT_TOL)?;
    let res = equispace::solve(&sub, tol)?;
    if res.covering {
        return Err(Error::NotAnHFamily { eps0: res.eps0 });
    }
    let mut distances = Vec::with_capacity(fam.len());
    for (alpha, body) in fam.bodies.iter().enumerate() {
        let d = body.distance(&res.v)?;
        if !chosen.contains(&alpha) && (d - res.eps0).abs() > 2.0 * tol {
            return Err(Error::HypothesisViolated { index: alpha, distance: d, expected: res.eps0 });
        }
        distances.push(d);
    }
    Ok(CommonDistancePoint { v: res.v, eps0: res.eps0, distances })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HellyOutcome {
    pub intersects: bool,
    /// A common point of all members, when found.
    pub witness: Option<Point>,
    /// Zero-based members of an `(n+1)`-subfamily covering the boundary but
    /// not the simplex.
    pub counterexample: Option<Vec<usize>>,
}

/// Decides whether the family has a common point: it does iff every
/// `(n+1)`-subfamily covering the boundary of the simplex covers the whole
/// simplex.
pub fn helly_criterion(fam: &FaceCoveringFamily, opts: CoverageOptions) -> Result<HellyOutcome> {
    let n = fam.ambient.dim();
    let k = fam.len();
    if k <= n && fam.is_face_covering() {
        // The chosen faces miss some vertex, which lies in all of them.
        let used: Vec<usize> = fam.contains.iter().map(|c| c[0]).collect();
        let free = (0..=n).find(|m| !used.contains(m)).expect("k <= n faces miss a vertex");
        return Ok(HellyOutcome {
            intersects: true,
            witness: Some(fam.ambient.vertices()[free].clone()),
            counterexample: None,
        });
    }
    if k > n {
        let count = composition_count(k - (n + 1), n + 2);
        if count > ENUMERATION_CAP {
            return Err(Error::EnumerationCapExceeded { count, cap: ENUMERATION_CAP });
        }
        let subsets: Vec<Vec<usize>> = (0..k).combinations(n + 1).collect();
        let sub_opts = CoverageOptions { cross_check: false, ..opts };
        let found = subsets
            .par_iter()
            .map(|idx| -> Result<Option<Vec<usize>>> {
                let bodies = fam.subset(idx);
                if !covers_boundary(&fam.ambient, &bodies, sub_opts)?.covered {
                    return Ok(None);
                }
                if covers_simplex(&fam.ambient, &bodies, sub_opts)?.covered {
                    return Ok(None);
                }
                Ok(Some(idx.clone()))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        match found {
            Some(Err(e)) => return Err(e),
            Some(Ok(counter)) => {
                return Ok(HellyOutcome { intersects: false, witness: None, counterexample: counter })
            }
            None => {}
        }
    }
    let dykstra = DykstraOptions { feas_tol: feasibility::DEFAULT_FEAS_TOL.min(opts.tol), ..Default::default() };
    let report = feasibility::intersect(&fam.bodies(), &fam.ambient, &fam.ambient.barycenter(), dykstra)?;
    Ok(HellyOutcome {
        intersects: report.status == FeasibilityStatus::Feasible,
        witness: report.witness().cloned(),
        counterexample: None,
    })
}
