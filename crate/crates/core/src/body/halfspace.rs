//! Intersections of finitely many halfspaces `n_k . x <= b_k`.

use crate::error::{Error, Result};
use crate::point::Point;

const MAX_CYCLES: usize = 200_000;
const DRIFT_TOL: f64 = 1e-14;
const VIOLATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceSet {
    normals: Vec<Point>,
    offsets: Vec<f64>,
}

impl HalfspaceSet {
    /// Normals are rescaled to unit length (offsets with them).
    pub fn new(normals: Vec<Point>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::InvalidParameter("halfspace set needs at least one halfspace".into()));
        }
        if normals.len() != offsets.len() {
            return Err(Error::DimensionMismatch { expected: normals.len(), got: offsets.len() });
        }
        let dim = normals[0].len();
        let mut unit = Vec::with_capacity(normals.len());
        let mut scaled = Vec::with_capacity(offsets.len());
        for (nrm, off) in normals.into_iter().zip(offsets) {
            if nrm.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: nrm.len() });
            }
            let len = nrm.norm();
            if !(len > 0.0 && len.is_finite() && off.is_finite()) {
                return Err(Error::InvalidParameter("halfspace normal must be finite and nonzero".into()));
            }
            unit.push(nrm / len);
            scaled.push(off / len);
        }
        Ok(Self { normals: unit, offsets: scaled })
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    /// Appends further constraints (e.g. the facets of the ambient simplex).
    pub fn with_constraints(mut self, extra: impl IntoIterator<Item = (Point, f64)>) -> Result<Self> {
        for (nrm, off) in extra {
            let one = HalfspaceSet::new(vec![nrm], vec![off])?;
            if one.dim() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), got: one.dim() });
            }
            self.normals.extend(one.normals);
            self.offsets.extend(one.offsets);
        }
        Ok(self)
    }

    pub fn max_violation(&self, x: &Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(nrm, off)| nrm.dot(x) - off)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Dykstra's corrected cyclic projections onto the halfspaces, each of
    /// which has a closed-form projection.
    pub fn project(&self, u: &Point) -> Result<Point> {
        if self.max_violation(u) <= 0.0 {
            return Ok(u.clone());
        }
        let m = self.normals.len();
        let scale = 1.0 + u.amax();
        let mut x = u.clone();
        // Dykstra increments are multiples of the normals; store the multipliers.
        let mut mult = vec![0.0; m];
        for cycle in 0..MAX_CYCLES {
            // Near-parallel normals let the multipliers drift while `x`
            // barely moves, so convergence is judged on the multipliers.
            let mut drift = 0.0f64;
            for k in 0..m {
                let nrm = &self.normals[k];
                // y = x + mult_k n_k, then project y onto {n_k . y <= b_k}
                let ny = nrm.dot(&x) + mult[k];
                let excess = ny - self.offsets[k];
                let new_mult = excess.max(0.0);
                x.axpy(mult[k] - new_mult, nrm, 1.0);
                drift = drift.max((mult[k] - new_mult).abs());
                mult[k] = new_mult;
            }
            if drift <= DRIFT_TOL * scale && self.max_violation(&x) <= VIOLATION_TOL * scale {
                return Ok(x);
            }
            if cycle + 1 == MAX_CYCLES {
                return Err(Error::NonConvergence { iterations: MAX_CYCLES, residual: drift });
            }
        }
        unreachable!()
    }
}
