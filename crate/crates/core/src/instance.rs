//! JSON instance files: a simplex, a list of set descriptors and an optional
//! face-to-set assignment.
//!
//! Face and set indices in files are one-based; the parsed [`Problem`] uses
//! zero-based indices like the rest of the crate.
//!
//! ```json
//! {
//!   "dim": 1,
//!   "simplex": [[0.0], [1.0]],
//!   "sets": [
//!     {"type": "vpolytope", "points": [[0.7], [1.0]]},
//!     {"type": "face-hull", "index": 2, "extras": [[0.3]]}
//!   ]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::body::{ConvexBody, CONTAINMENT_TOL};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::simplex::{Simplex, MEMBERSHIP_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub dim: usize,
    /// `dim + 1` vertex rows.
    pub simplex: Vec<Vec<f64>>,
    pub sets: Vec<SetDescriptor>,
    /// Face (one-based) to set (one-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<usize, usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetDescriptor {
    Vpolytope { points: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    /// `normals[k] . x <= offsets[k]`, intersected with the simplex.
    Halfspaces { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    Face { index: usize },
    /// `co(S^index ∪ extras)`.
    FaceHull { index: usize, extras: Vec<Vec<f64>> },
}

/// A validated instance in library terms.
#[derive(Debug, Clone)]
pub struct Problem {
    pub simplex: Simplex,
    pub bodies: Vec<ConvexBody>,
    /// Zero-based set for each zero-based face, when given.
    pub assignment: Option<Vec<Option<usize>>>,
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let inst: Instance = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    inst.to_problem()?;
    Ok(inst)
}

/// Pretty-printed JSON for an instance.
pub fn to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(inst).expect("instances serialize")
}

fn row(field: &str, values: &[f64], dim: usize) -> Result<Point> {
    if values.len() != dim {
        return Err(Error::validation(field, format!("expected {dim} coordinates, got {}", values.len())));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::validation(field, "coordinates must be finite"));
    }
    Ok(Point::from_column_slice(values))
}

fn inside(field: &str, simplex: &Simplex, values: &[f64]) -> Result<Point> {
    let p = row(field, values, simplex.dim())?;
    if !simplex.contains(&p, MEMBERSHIP_TOL) {
        return Err(Error::validation(field, "point lies outside the simplex"));
    }
    Ok(p)
}

fn face_index(field: &str, index: usize, dim: usize) -> Result<usize> {
    if index == 0 || index > dim + 1 {
        return Err(Error::validation(field, format!("face index {index} not in 1..={}", dim + 1)));
    }
    Ok(index - 1)
}

impl Instance {
    /// Builds the simplex and bodies, checking arity, membership in the
    /// simplex and the assignment.
    pub fn to_problem(&self) -> Result<Problem> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::validation("dim", "dimension must be at least 1"));
        }
        if self.simplex.len() != dim + 1 {
            return Err(Error::validation("simplex", format!("expected {} vertices, got {}", dim + 1, self.simplex.len())));
        }
        let vertices = self
            .simplex
            .iter()
            .enumerate()
            .map(|(k, v)| row(&format!("simplex[{k}]"), v, dim))
            .collect::<Result<Vec<_>>>()?;
        let simplex = Simplex::new(vertices).map_err(|e| Error::validation("simplex", e))?;
        let bodies = self
            .sets
            .iter()
            .enumerate()
            .map(|(k, d)| build(&simplex, d, &format!("sets[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let assignment = match &self.assignment {
            None => None,
            Some(map) => {
                let mut out = vec![None; dim + 1];
                for (&face, &set) in map {
                    let field = format!("assignment.{face}");
                    let f = face_index(&field, face, dim)?;
                    if set == 0 || set > bodies.len() {
                        return Err(Error::validation(&field, format!("set index {set} not in 1..={}", bodies.len())));
                    }
                    let gap = bodies[set - 1].face_gap(&simplex.face(f)?)?;
                    if gap > CONTAINMENT_TOL {
                        return Err(Error::validation(&field, Error::FaceNotContained { face, distance: gap }));
                    }
                    out[f] = Some(set - 1);
                }
                Some(out)
            }
        };
        Ok(Problem { simplex, bodies, assignment })
    }
}

fn build(simplex: &Simplex, desc: &SetDescriptor, field: &str) -> Result<ConvexBody> {
    let dim = simplex.dim();
    let points = |name: &str, rows: &[Vec<f64>]| -> Result<Vec<Point>> {
        rows.iter()
            .enumerate()
            .map(|(j, r)| inside(&format!("{field}.{name}[{j}]"), simplex, r))
            .collect()
    };
    match desc {
        SetDescriptor::Vpolytope { points: rows } => {
            if rows.is_empty() {
                return Err(Error::validation(format!("{field}.points"), "at least one point is required"));
            }
            ConvexBody::vpolytope(points("points", rows)?).map_err(|e| Error::validation(field, e))
        }
        SetDescriptor::Ball { center, radius } => {
            let c = inside(&format!("{field}.center"), simplex, center)?;
            if !(*radius >= 0.0 && radius.is_finite()) {
                return Err(Error::validation(format!("{field}.radius"), "radius must be finite and nonnegative"));
            }
            let room = simplex
                .facet_halfspaces()
                .iter()
                .map(|(nrm, off)| off - nrm.dot(&c))
                .fold(f64::INFINITY, f64::min);
            if *radius > room + MEMBERSHIP_TOL {
                return Err(Error::validation(
                    format!("{field}.radius"),
                    format!("ball leaves the simplex (room {room})"),
                ));
            }
            ConvexBody::ball(c, *radius).map_err(|e| Error::validation(field, e))
        }
        SetDescriptor::Halfspaces { normals, offsets } => {
            if normals.len() != offsets.len() {
                return Err(Error::validation(
                    format!("{field}.offsets"),
                    format!("expected {} offsets, got {}", normals.len(), offsets.len()),
                ));
            }
            let mut ns = normals
                .iter()
                .enumerate()
                .map(|(j, r)| row(&format!("{field}.normals[{j}]"), r, dim))
                .collect::<Result<Vec<_>>>()?;
            let mut bs = offsets.clone();
            if bs.iter().any(|b| !b.is_finite()) {
                return Err(Error::validation(format!("{field}.offsets"), "offsets must be finite"));
            }
            for (nrm, off) in simplex.facet_halfspaces() {
                ns.push(nrm);
                bs.push(off);
            }
            let body = ConvexBody::halfspaces(ns, bs).map_err(|e| Error::validation(field, e))?;
            let empty = || Error::validation(field, "halfspaces do not meet the simplex");
            let p = body.project(&simplex.barycenter()).map_err(|_| empty())?;
            match &body {
                ConvexBody::Halfspaces(h) if h.max_violation(&p) > MEMBERSHIP_TOL => Err(empty()),
                _ => Ok(body),
            }
        }
        SetDescriptor::Face { index } => {
            let f = face_index(&format!("{field}.index"), *index, dim)?;
            Ok(ConvexBody::face(simplex.face(f)?))
        }
        SetDescriptor::FaceHull { index, extras } => {
            let f = face_index(&format!("{field}.index"), *index, dim)?;
            let mut g = simplex.face(f)?.vertices().to_vec();
            g.extend(points("extras", extras)?);
            ConvexBody::vpolytope(g).map_err(|e| Error::validation(field, e))
        }
    }
}
