//! Nearest point of a convex hull of finitely many points.
//!
//! Uses Wolfe's corral method: the iterate is always the minimum-norm point of
//! the affine hull of a small affinely independent subset (the corral) of the
//! shifted generators, and the corral is grown or shrunk until no generator
//! improves the iterate. Termination is finite in exact arithmetic.

use crate::error::{Error, Result};
use crate::point::Point;

/// Optimality slack, relative to the largest squared generator norm.
const OPTIMALITY_TOL: f64 = 1e-14;
/// Weights at or below this are dropped from the corral.
const WEIGHT_TOL: f64 = 1e-13;
/// Relative pivot threshold for the affine minimizer's QR step.
const PIVOT_TOL: f64 = 1e-12;

/// Convex hull of a nonempty list of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    generators: Vec<Point>,
}

impl VPolytope {
    pub fn new(generators: Vec<Point>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidParameter("polytope needs at least one generator".into()))?;
        let dim = first.len();
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if !crate::point::is_finite(g) {
                return Err(Error::InvalidParameter("non-finite generator".into()));
            }
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn project(&self, u: &Point) -> Result<Point> {
        nearest_in_hull(&self.generators, u)
    }
}

/// Nearest point of `co(generators)` to `u`.
pub fn nearest_in_hull(generators: &[Point], u: &Point) -> Result<Point> {
    let dim = u.len();
    if generators.len() == 1 {
        return Ok(generators[0].clone());
    }
    let m = generators.len();
    let mut shifted = Vec::with_capacity(m * dim);
    for g in generators {
        debug_assert_eq!(g.len(), dim);
        shifted.extend(g.iter().zip(u.iter()).map(|(a, b)| a - b));
    }
    let x = min_norm_point(&shifted, m, dim)?;
    Ok(Point::from_iterator(dim, x.iter().zip(u.iter()).map(|(a, b)| a + b)))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum-norm point of the convex hull of `m` points stored row-wise in `pts`.
pub(crate) fn min_norm_point(pts: &[f64], m: usize, dim: usize) -> Result<Vec<f64>> {
    let row = |j: usize| &pts[j * dim..(j + 1) * dim];

    let mut scale = 0.0f64;
    let mut start = 0;
    let mut start_norm = f64::INFINITY;
    for j in 0..m {
        let s = dot(row(j), row(j));
        scale = scale.max(s);
        if s < start_norm {
            start_norm = s;
            start = j;
        }
    }
    if scale == 0.0 {
        return Ok(vec![0.0; dim]);
    }

    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = row(start).to_vec();

    let max_steps = 50 * (m + dim) + 100;
    let mut steps = 0;
    loop {
        steps += 1;
        if steps > max_steps {
            return Err(Error::NonConvergence { iterations: steps, residual: dot(&x, &x).sqrt() });
        }
        let xx = dot(&x, &x);
        if xx <= 1e-30 * scale {
            return Ok(x);
        }
        let (mut best, mut best_val) = (0, f64::INFINITY);
        for j in 0..m {
            let v = dot(&x, row(j));
            if v < best_val {
                best_val = v;
                best = j;
            }
        }
        if best_val >= xx - OPTIMALITY_TOL * scale || corral.contains(&best) {
            return Ok(x);
        }
        corral.push(best);
        weights.push(0.0);

        // Minor cycle: move toward the affine minimizer of the corral, dropping
        // points whose weight would turn negative.
        loop {
            steps += 1;
            if steps > max_steps {
                return Err(Error::NonConvergence { iterations: steps, residual: xx.sqrt() });
            }
            let Some(alpha) = affine_minimizer(pts, dim, &corral) else {
                // Numerically dependent corral: drop the newest point and stop.
                corral.pop();
                weights.pop();
                return Ok(x);
            };
            if alpha.iter().all(|&a| a > WEIGHT_TOL) {
                weights = alpha;
                x = combine(pts, dim, &corral, &weights);
                break;
            }
            let mut theta = 1.0f64;
            for (k, &a) in alpha.iter().enumerate() {
                if a <= WEIGHT_TOL {
                    let w = weights[k];
                    let step = if w - a > 0.0 { w / (w - a) } else { 0.0 };
                    theta = theta.min(step);
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            // Remove every point whose weight vanished; at least the smallest.
            let min_k = weights
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(k, _)| k)
                .unwrap_or(0);
            let mut next_corral = Vec::with_capacity(corral.len());
            let mut kept = Vec::with_capacity(corral.len());
            for (k, (&j, &w)) in corral.iter().zip(&weights).enumerate() {
                if w > WEIGHT_TOL && k != min_k {
                    next_corral.push(j);
                    kept.push(w);
                }
            }
            corral = next_corral;
            let total: f64 = kept.iter().sum();
            for w in kept.iter_mut() {
                *w /= total;
            }
            weights = kept;
            x = combine(pts, dim, &corral, &weights);
        }
    }
}

fn combine(pts: &[f64], dim: usize, corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&j, &w) in corral.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&pts[j * dim..(j + 1) * dim]) {
            *xi += w * pi;
        }
    }
    x
}

/// Weights (summing to one) of the minimum-norm point of the affine hull of
/// the corral, or `None` when the corral is numerically affinely dependent.
fn affine_minimizer(pts: &[f64], dim: usize, corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let base = &pts[corral[0] * dim..(corral[0] + 1) * dim];
    let cols = k - 1;
    if cols > dim {
        return None;
    }
    // Modified Gram-Schmidt on the edge vectors p_j - p_0.
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut r = vec![0.0; cols * cols];
    for c in 0..cols {
        let j = corral[c + 1];
        let mut v: Vec<f64> = pts[j * dim..(j + 1) * dim].iter().zip(base).map(|(a, b)| a - b).collect();
        let orig = dot(&v, &v).sqrt();
        for (i, qi) in q.iter().enumerate() {
            let proj = dot(qi, &v);
            r[i * cols + c] = proj;
            for (vk, qk) in v.iter_mut().zip(qi) {
                *vk -= proj * qk;
            }
        }
        let nrm = dot(&v, &v).sqrt();
        if orig == 0.0 || nrm <= PIVOT_TOL * orig {
            return None;
        }
        r[c * cols + c] = nrm;
        for vk in v.iter_mut() {
            *vk /= nrm;
        }
        q.push(v);
    }
    // beta = -R^{-1} Q^T base
    let mut rhs: Vec<f64> = q.iter().map(|qi| -dot(qi, base)).collect();
    for i in (0..cols).rev() {
        let mut s = rhs[i];
        for c in i + 1..cols {
            s -= r[i * cols + c] * rhs[c];
        }
        rhs[i] = s / r[i * cols + i];
    }
    let mut alpha = Vec::with_capacity(k);
    alpha.push(1.0 - rhs.iter().sum::<f64>());
    alpha.extend(rhs);
    Some(alpha)
}
