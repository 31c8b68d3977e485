//! Nonemptiness of `B_eps = S ∩ A^1_eps ∩ ... ∩ A^m_eps` by Dykstra's
//! alternating projections, and the bisection on `eps` built on top of it.

use std::sync::Arc;

use crate::body::{epsilon_hull_arc, ConvexBody};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::simplex::Simplex;

pub const DEFAULT_FEAS_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 200_000;
/// Relative change over a full cycle below which the alternation counts as
/// stalled: of the residual for the corrected iteration, of the iterate for
/// the plain one.
pub const STALL_TOL: f64 = 1e-12;
/// Consecutive stalled cycles needed before switching to plain cycles, and
/// before declaring infeasibility from them.
const STALL_CYCLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub status: FeasibilityStatus,
    /// Final iterate; always a point of the ambient simplex.
    pub point: Point,
    /// Largest distance from `point` to a body.
    pub residual: f64,
    /// Full cycles performed.
    pub iterations: usize,
}

impl FeasibilityReport {
    pub fn witness(&self) -> Option<&Point> {
        (self.status == FeasibilityStatus::Feasible).then_some(&self.point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DykstraOptions {
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        Self { feas_tol: DEFAULT_FEAS_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

fn residual_of(bodies: &[ConvexBody], x: &Point) -> Result<f64> {
    let mut r = 0.0f64;
    for b in bodies {
        r = r.max(b.distance(x)?);
    }
    Ok(r)
}

/// Runs Dykstra's corrected cyclic projections over `bodies` and the ambient
/// simplex (projected onto last, so every reported point lies in it).
pub fn intersect(
    bodies: &[ConvexBody],
    ambient: &Simplex,
    start: &Point,
    opts: DykstraOptions,
) -> Result<FeasibilityReport> {
    run(bodies, bodies, ambient, start, opts)
}

/// Whether the `eps`-hulls of `bodies` meet inside the ambient simplex.
///
/// The projections target the smaller hulls at `(lo + eps) / 2`, so the
/// iterate enters the `eps`-hulls after finitely many cycles instead of
/// creeping up on their boundary. When the smaller hulls miss each other
/// the test is repeated on the `eps`-hulls themselves. `lo` is a level
/// already known to be infeasible (or zero).
pub fn intersect_hulls(
    bodies: &[Arc<ConvexBody>],
    eps: f64,
    lo: f64,
    ambient: &Simplex,
    start: &Point,
    opts: DykstraOptions,
) -> Result<FeasibilityReport> {
    let hulls = |level: f64| -> Result<Vec<ConvexBody>> {
        bodies.iter().map(|b| epsilon_hull_arc(Arc::clone(b), level)).collect()
    };
    let target = hulls(eps)?;
    let inner = 0.5 * (lo.clamp(0.0, eps) + eps);
    let first = run(&hulls(inner)?, &target, ambient, start, opts)?;
    if first.status == FeasibilityStatus::Feasible {
        return Ok(first);
    }
    let second = run(&target, &target, ambient, &first.point, opts)?;
    Ok(FeasibilityReport { iterations: first.iterations + second.iterations, ..second })
}

/// Dykstra over `project` and the simplex; feasibility is judged by the
/// distances to `test`, which contain the matching `project` bodies.
fn run(
    project: &[ConvexBody],
    test: &[ConvexBody],
    ambient: &Simplex,
    start: &Point,
    opts: DykstraOptions,
) -> Result<FeasibilityReport> {
    let bodies = project;
    if bodies.is_empty() {
        return Err(Error::InvalidParameter("intersect needs at least one body".into()));
    }
    let n = ambient.dim();
    if start.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: start.len() });
    }
    let scale = ambient.diameter();
    let mut x = ambient.project(start);
    let residual = residual_of(test, &x)?;
    if residual <= opts.feas_tol {
        return Ok(FeasibilityReport { status: FeasibilityStatus::Feasible, point: x, residual, iterations: 0 });
    }

    let mut increments = vec![Point::zeros(n); bodies.len() + 1];
    let mut previous = residual;
    let mut stalled = 0;
    for cycle in 1..=opts.max_iter {
        for (j, incr) in increments.iter_mut().enumerate() {
            let y = &x + &*incr;
            let p = match bodies.get(j) {
                Some(b) => b.project(&y)?,
                None => ambient.project(&y),
            };
            *incr = y - &p;
            x = p;
        }
        let residual = residual_of(test, &x)?;
        if residual <= opts.feas_tol {
            return Ok(FeasibilityReport {
                status: FeasibilityStatus::Feasible,
                point: x,
                residual,
                iterations: cycle,
            });
        }
        if (residual - previous).abs() <= STALL_TOL * residual.max(scale) {
            stalled += 1;
            if stalled >= STALL_CYCLES {
                // The corrected iterate can sit still while its increments
                // build up, so a stall alone does not show infeasibility.
                return plain_cycles(bodies, test, ambient, x, cycle, opts, scale);
            }
        } else {
            stalled = 0;
        }
        previous = residual;
    }
    Ok(FeasibilityReport {
        status: FeasibilityStatus::Undecided,
        point: x,
        residual: previous,
        iterations: opts.max_iter,
    })
}

/// Uncorrected cyclic projections from `x`. Their fixed points are exactly
/// the intersection when it is nonempty, so a fixed point with a positive
/// residual shows the intersection is empty.
fn plain_cycles(
    bodies: &[ConvexBody],
    test: &[ConvexBody],
    ambient: &Simplex,
    mut x: Point,
    done: usize,
    opts: DykstraOptions,
    scale: f64,
) -> Result<FeasibilityReport> {
    let mut still = 0;
    let mut residual = residual_of(test, &x)?;
    for cycle in done + 1..=opts.max_iter {
        let mut y = x.clone();
        for b in bodies {
            y = b.project(&y)?;
        }
        y = ambient.project(&y);
        let step = (&y - &x).norm();
        x = y;
        residual = residual_of(test, &x)?;
        if residual <= opts.feas_tol {
            return Ok(FeasibilityReport { status: FeasibilityStatus::Feasible, point: x, residual, iterations: cycle });
        }
        if step <= STALL_TOL * scale {
            still += 1;
            if still >= STALL_CYCLES {
                return Ok(FeasibilityReport {
                    status: FeasibilityStatus::Infeasible,
                    point: x,
                    residual,
                    iterations: cycle,
                });
            }
        } else {
            still = 0;
        }
    }
    Ok(FeasibilityReport { status: FeasibilityStatus::Undecided, point: x, residual, iterations: opts.max_iter })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionOptions {
    /// Stop once the bracket is narrower than this.
    pub tol: f64,
    pub dykstra: DykstraOptions,
}

impl BisectionOptions {
    /// Default bracket width `1e-6 * diameter(S)`.
    pub fn for_simplex(ambient: &Simplex) -> Self {
        Self { tol: 1e-6 * ambient.diameter(), dykstra: DykstraOptions::default() }
    }
}

/// Outcome of the bisection on `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxDistance {
    /// Midpoint of the final bracket, an estimate of `inf { eps : B_eps != {} }`.
    pub value: f64,
    /// Witness of the upper end of the bracket.
    pub argmin: Point,
    pub lo: f64,
    pub hi: f64,
    /// Every probed `eps` with its verdict, in probe order.
    pub trace: Vec<(f64, FeasibilityStatus)>,
    /// Dykstra cycles summed over all probes.
    pub iterations: usize,
}

/// Smallest `eps` for which the epsilon-hulls of `bodies` meet inside the
/// ambient simplex, by bisection over `[0, diameter]`.
pub fn min_max_distance(
    bodies: &[ConvexBody],
    ambient: &Simplex,
    start: &Point,
    opts: BisectionOptions,
) -> Result<MinMaxDistance> {
    if bodies.is_empty() {
        return Err(Error::InvalidParameter("min_max_distance needs at least one body".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("bisection tolerance {} must be positive", opts.tol)));
    }
    let shared: Vec<Arc<ConvexBody>> = bodies.iter().cloned().map(Arc::new).collect();
    let mut witness = ambient.project(start);
    // Any point of S is a witness for its own largest distance.
    let mut hi = residual_of(bodies, &witness)?.min(ambient.diameter());
    let mut lo = 0.0;
    let mut trace = Vec::new();
    let mut iterations = 0;
    while hi - lo >= opts.tol {
        let mid = 0.5 * (lo + hi);
        let report = intersect_hulls(&shared, mid, lo, ambient, &witness, opts.dykstra)?;
        iterations += report.iterations;
        trace.push((mid, report.status));
        match report.status {
            FeasibilityStatus::Feasible => {
                hi = mid;
                witness = report.point;
            }
            FeasibilityStatus::Infeasible => lo = mid,
            FeasibilityStatus::Undecided => {
                return Err(Error::BisectionStalled { eps: mid, lo, hi, residual: report.residual });
            }
        }
    }
    Ok(MinMaxDistance { value: 0.5 * (lo + hi), argmin: witness, lo, hi, trace, iterations })
}
