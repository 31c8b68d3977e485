//! Points of the ambient space and a few helpers shared by every module.

use nalgebra::DVector;

/// A point (or vector) of the ambient Euclidean space.
pub type Point = DVector<f64>;

/// Builds a point from a coordinate slice.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

pub fn distance(a: &Point, b: &Point) -> f64 {
    (a - b).norm()
}

/// Largest pairwise distance in a point set (0 for fewer than two points).
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(distance(a, b));
        }
    }
    best
}

pub fn is_finite(p: &Point) -> bool {
    p.iter().all(|x| x.is_finite())
}
