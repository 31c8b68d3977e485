//! Deformation of the face family into a covering family.
//!
//! For covering sets `C^i ⊇ S^i`, the blends `C^i_t = (1 - t) S^i + t C^i`
//! grow with `t`: at `t = 0` they are the faces, at `t = 1` the covers. The
//! blended family is non-covering below a threshold `t0` and covering from
//! `t0` on, and its common distance `eps_t` shrinks to zero as `t -> t0`.

use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::body::{blend_arc, ConvexBody, CONTAINMENT_TOL};
use crate::equispace::{self, HFamily};
use crate::error::{Error, Result};
use crate::numfmt::fmt_real;
use crate::point::Point;
use crate::simplex::Simplex;

/// Default number of uniform samples on `[0, t0)`.
pub const DEFAULT_UNIFORM_SAMPLES: usize = 32;

const T0_PROBE_FACTOR: f64 = 1e-2;

/// A simplex with covering sets `C^0..C^n`, `C^i ⊇ S^i`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    ambient: Simplex,
    covers: Vec<Arc<ConvexBody>>,
}

impl Homotopy {
    pub fn new(ambient: Simplex, covers: Vec<ConvexBody>) -> Result<Self> {
        // Reuse the family checks: count, dimensions and face containment.
        let fam = HFamily::new(ambient, covers)?;
        Ok(Self { ambient: fam.ambient().clone(), covers: fam.shared_bodies().to_vec() })
    }

    pub fn ambient(&self) -> &Simplex {
        &self.ambient
    }

    /// The blended family at parameter `t`.
    pub fn family(&self, t: f64) -> Result<HFamily> {
        let bodies = self
            .covers
            .iter()
            .enumerate()
            .map(|(i, c)| blend_arc(self.ambient.face(i)?, Arc::clone(c), t, CONTAINMENT_TOL).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        HFamily::from_shared(self.ambient.clone(), bodies, CONTAINMENT_TOL)
    }

    /// Bisection on `t` for the covering threshold; the result is the
    /// midpoint of a bracket narrower than `tol`.
    ///
    /// The covering predicate is evaluated at `tol / 100`: it reports
    /// covering once `eps_t` is within its tolerance of zero, which shifts
    /// the threshold down by about that tolerance.
    pub fn find_t0(&self, tol: f64) -> Result<f64> {
        let probe = tol * T0_PROBE_FACTOR;
        let top = self.family(1.0)?;
        if equispace::is_hfamily(&top, probe)? {
            return Err(Error::NotACovering { eps0: equispace::solve(&top, probe)?.eps0 });
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo >= tol {
            let mid = 0.5 * (lo + hi);
            if equispace::is_hfamily(&self.family(mid)?, probe)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Solves the blended family at every sample `t < t0`.
    ///
    /// Samples are sorted and deduplicated. A failed solve is recorded in
    /// [`HomotopyCurve::failures`] and does not abort the curve.
    pub fn epsilon_curve(&self, t_samples: &[f64], tol: f64) -> Result<HomotopyCurve> {
        let t0 = self.find_t0(tol)?;
        self.epsilon_curve_with_t0(t0, t_samples, tol)
    }

    pub fn epsilon_curve_with_t0(&self, t0: f64, t_samples: &[f64], tol: f64) -> Result<HomotopyCurve> {
        let mut ts: Vec<f64> = t_samples.iter().copied().filter(|&t| (0.0..t0).contains(&t)).collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let solved: Vec<(f64, Result<(f64, Point)>)> = ts
            .par_iter()
            .map(|&t| {
                let r = self.family(t).and_then(|fam| equispace::solve(&fam, tol)).map(|r| (r.eps0, r.v));
                (t, r)
            })
            .collect();
        let mut samples = Vec::new();
        let mut failures = Vec::new();
        for (t, r) in solved {
            match r {
                Ok((eps_t, v_t)) => samples.push(CurveSample { t, eps_t, v_t }),
                Err(e) => failures.push((t, e)),
            }
        }
        let delta0 = samples.iter().map(|s| s.eps_t).reduce(f64::min);
        Ok(HomotopyCurve { samples, failures, t0, delta0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub eps_t: f64,
    pub v_t: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyCurve {
    /// Successful samples in increasing `t`.
    pub samples: Vec<CurveSample>,
    pub failures: Vec<(f64, Error)>,
    pub t0: f64,
    /// Smallest sampled `eps_t`; `None` without samples.
    pub delta0: Option<f64>,
}

impl HomotopyCurve {
    /// True if `eps_t` never increases by more than `slack` along the samples.
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.samples.windows(2).all(|w| w[1].eps_t <= w[0].eps_t + slack)
    }

    /// CSV with header `t,eps_t,v1,..,vn`, reals at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let dim = self.samples.first().map_or(0, |s| s.v_t.len());
        let mut header = String::from("t,eps_t");
        for k in 1..=dim {
            header.push_str(&format!(",v{k}"));
        }
        writeln!(out, "{header}")?;
        for s in &self.samples {
            let mut line = format!("{},{}", fmt_real(s.t), fmt_real(s.eps_t));
            for x in s.v_t.iter() {
                line.push(',');
                line.push_str(&fmt_real(*x));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// `count` uniform samples on `[0, t0)` plus the tail `t0 - 2^-k` down to a
/// spacing of `10 * tol`, sorted.
pub fn default_samples(t0: f64, count: usize, tol: f64) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..count).map(|j| t0 * j as f64 / count as f64).collect();
    let mut gap = 0.5f64;
    while gap >= 10.0 * tol {
        if t0 - gap > 0.0 {
            ts.push(t0 - gap);
        }
        gap *= 0.5;
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// The blended family `{(1 - t) S^i + t C^i}`.
pub fn blend_family(ambient: &Simplex, covers: &[ConvexBody], t: f64) -> Result<HFamily> {
    Homotopy::new(ambient.clone(), covers.to_vec())?.family(t)
}

pub fn find_t0(ambient: &Simplex, covers: &[ConvexBody], tol: f64) -> Result<f64> {
    Homotopy::new(ambient.clone(), covers.to_vec())?.find_t0(tol)
}

pub fn epsilon_curve(ambient: &Simplex, covers: &[ConvexBody], t_samples: &[f64], tol: f64) -> Result<HomotopyCurve> {
    Homotopy::new(ambient.clone(), covers.to_vec())?.epsilon_curve(t_samples, tol)
}
