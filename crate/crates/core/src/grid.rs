//! Brute-force barycentric grid oracle.
//!
//! The grid of depth `m` over vertices `a_0..a_k` is every point
//! `sum (j_i / m) a_i` with nonnegative integers `j_i` summing to `m`. Distance
//! functions are 1-Lipschitz, so extremal values over the grid are within the
//! mesh `diameter / m` of the extremal values over the whole simplex.
//!
//! Grid points are visited in lexicographic order of their integer
//! coordinates; ties are always resolved toward the first point visited.

use rayon::prelude::*;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::point::{self, Point};
use crate::simplex::Simplex;

pub const DEFAULT_POINT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone)]
pub struct BaryGrid {
    vertices: Vec<Point>,
    depth: usize,
    mesh: f64,
}

/// An extremal grid value and where it is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValue {
    pub value: f64,
    pub point: Point,
    /// Integer barycentric coordinates of `point`.
    pub index: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridExtrema {
    /// `max_u min_i d(u, A^i)`.
    pub maximin: GridValue,
    /// `min_u max_i d(u, A^i)`.
    pub minimax: GridValue,
    pub mesh: f64,
}

/// Number of compositions of `m` into `parts` nonnegative parts.
pub fn composition_count(m: usize, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(m == 0);
    }
    let k = (parts - 1) as u128;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (m as u128 + i) / i;
    }
    c
}

impl BaryGrid {
    pub fn new(vertices: Vec<Point>, depth: usize) -> Result<Self> {
        Self::with_cap(vertices, depth, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(vertices: Vec<Point>, depth: usize, cap: u128) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("grid depth must be at least 1".into()));
        }
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one vertex".into()));
        }
        let count = composition_count(depth, vertices.len());
        if count > cap {
            return Err(Error::GridTooLarge { count, cap });
        }
        let mesh = point::diameter(&vertices) / depth as f64;
        Ok(Self { vertices, depth, mesh })
    }

    pub fn over_simplex(simplex: &Simplex, depth: usize) -> Result<Self> {
        Self::new(simplex.vertices().to_vec(), depth)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn len(&self) -> u128 {
        composition_count(self.depth, self.vertices.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point_at(&self, index: &[usize]) -> Point {
        let mut p = Point::zeros(self.vertices[0].len());
        let m = self.depth as f64;
        for (&k, v) in index.iter().zip(&self.vertices) {
            if k > 0 {
                p.axpy(k as f64 / m, v, 1.0);
            }
        }
        p
    }

    /// All grid points in lexicographic order of their integer coordinates.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        let parts = self.vertices.len();
        for lead in 0..=self.depth {
            for_each_composition(self.depth - lead, parts - 1, lead, |idx| out.push(self.point_at(idx)));
        }
        out
    }

    /// Runs `eval` on every grid point, one chunk per leading coordinate,
    /// and returns the chunk outputs in lexicographic order.
    fn map_chunks<T, F>(&self, eval: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut dyn FnMut() -> Option<(Vec<usize>, Point)>) -> Result<T> + Sync,
    {
        let parts = self.vertices.len();
        (0..=self.depth)
            .into_par_iter()
            .map(|lead| {
                let mut points = Vec::new();
                for_each_composition(self.depth - lead, parts - 1, lead, |idx| {
                    points.push((idx.to_vec(), self.point_at(idx)));
                });
                let mut it = points.into_iter();
                eval(&mut || it.next())
            })
            .collect()
    }

    /// Maximin and minimax of the distance functions of `bodies` in one pass.
    pub fn extrema(&self, bodies: &[ConvexBody]) -> Result<GridExtrema> {
        if bodies.is_empty() {
            return Err(Error::InvalidParameter("grid oracle needs at least one body".into()));
        }
        let chunks = self.map_chunks(|next| {
            let mut best_max: Option<(f64, Vec<usize>, Point)> = None;
            let mut best_min: Option<(f64, Vec<usize>, Point)> = None;
            while let Some((idx, u)) = next() {
                let (lo, hi) = min_max_distance_at(bodies, &u)?;
                if best_max.as_ref().is_none_or(|b| lo > b.0) {
                    best_max = Some((lo, idx.clone(), u.clone()));
                }
                if best_min.as_ref().is_none_or(|b| hi < b.0) {
                    best_min = Some((hi, idx, u));
                }
            }
            Ok((best_max, best_min))
        })?;
        let mut maximin: Option<(f64, Vec<usize>, Point)> = None;
        let mut minimax: Option<(f64, Vec<usize>, Point)> = None;
        for (mx, mn) in chunks {
            if let Some(c) = mx {
                if maximin.as_ref().is_none_or(|b| c.0 > b.0) {
                    maximin = Some(c);
                }
            }
            if let Some(c) = mn {
                if minimax.as_ref().is_none_or(|b| c.0 < b.0) {
                    minimax = Some(c);
                }
            }
        }
        let wrap = |(value, index, point): (f64, Vec<usize>, Point)| GridValue { value, point, index };
        Ok(GridExtrema {
            maximin: wrap(maximin.expect("grid is nonempty")),
            minimax: wrap(minimax.expect("grid is nonempty")),
            mesh: self.mesh,
        })
    }

    /// Grid points whose largest distance to `bodies` is at most `level`.
    pub fn sublevel_set(&self, bodies: &[ConvexBody], level: f64) -> Result<Vec<Point>> {
        let chunks = self.map_chunks(|next| {
            let mut hits = Vec::new();
            while let Some((_, u)) = next() {
                let mut worst = 0.0f64;
                for b in bodies {
                    worst = worst.max(b.distance(&u)?);
                    if worst > level {
                        break;
                    }
                }
                if worst <= level {
                    hits.push(u);
                }
            }
            Ok(hits)
        })?;
        Ok(chunks.into_iter().flatten().collect())
    }
}

fn min_max_distance_at(bodies: &[ConvexBody], u: &Point) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for b in bodies {
        let d = b.distance(u)?;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

/// Calls `f` with every composition `[lead, k_1, .., k_parts]` of
/// `lead + total`, tails in lexicographic order.
fn for_each_composition(total: usize, parts: usize, lead: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; parts + 1];
    idx[0] = lead;
    if parts == 0 {
        if total == 0 {
            f(&idx);
        }
        return;
    }
    idx[parts] = total;
    loop {
        f(&idx);
        // Lexicographic successor of the tail idx[1..].
        let mut tail = 0;
        let mut pos = None;
        for i in (1..parts).rev() {
            tail += idx[i + 1];
            if tail > 0 {
                pos = Some(i);
                break;
            }
        }
        let Some(i) = pos else { return };
        idx[i] += 1;
        for slot in idx[i + 1..].iter_mut() {
            *slot = 0;
        }
        idx[parts] = tail - 1;
    }
}

/// `max_{u in grid} min_i d(u, bodies_i)`.
pub fn grid_maximin(simplex: &Simplex, bodies: &[ConvexBody], depth: usize) -> Result<GridValue> {
    Ok(BaryGrid::over_simplex(simplex, depth)?.extrema(bodies)?.maximin)
}

/// `min_{u in grid} max_i d(u, bodies_i)`.
pub fn grid_minimax(simplex: &Simplex, bodies: &[ConvexBody], depth: usize) -> Result<GridValue> {
    Ok(BaryGrid::over_simplex(simplex, depth)?.extrema(bodies)?.minimax)
}

/// Grid points `u` with `max_i d(u, bodies_i) <= eps0 + slack`.
pub fn equispace_locus(
    simplex: &Simplex,
    bodies: &[ConvexBody],
    depth: usize,
    eps0: f64,
    slack: f64,
) -> Result<Vec<Point>> {
    BaryGrid::over_simplex(simplex, depth)?.sublevel_set(bodies, eps0 + slack)
}
