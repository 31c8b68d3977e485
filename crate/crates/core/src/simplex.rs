//! The ambient n-simplex, its maximal faces, and barycentric coordinates.

use nalgebra::DMatrix;

use crate::body::polytope::nearest_in_hull;
use crate::error::{Error, Result};
use crate::point::{self, Point};

/// Threshold on the normalized edge determinant `|det E| / prod ||e_i||`.
pub const AFFINE_INDEPENDENCE_TOL: f64 = 1e-10;
/// Default slack for "u in S" checks in barycentric coordinates.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `co{a_0, ..., a_n}` for affinely independent `a_i` in R^n.
#[derive(Debug, Clone)]
pub struct Simplex {
    vertices: Vec<Point>,
    /// Inverse of the matrix whose columns are `a_i - a_n`, `i < n`.
    edge_inverse: DMatrix<f64>,
}

impl PartialEq for Simplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let count = vertices.len();
        if count < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: count });
        }
        let n = count - 1;
        for v in &vertices {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            if !point::is_finite(v) {
                return Err(Error::InvalidParameter("non-finite vertex".into()));
            }
        }
        let last = &vertices[n];
        let edges = DMatrix::from_fn(n, n, |r, c| vertices[c][r] - last[r]);
        let lengths: f64 = (0..n).map(|c| edges.column(c).norm()).product();
        let det = edges.determinant();
        let normalized = if lengths > 0.0 { det.abs() / lengths } else { 0.0 };
        if normalized < AFFINE_INDEPENDENCE_TOL {
            return Err(Error::DegenerateSimplex { det: normalized });
        }
        let edge_inverse = edges
            .try_inverse()
            .ok_or(Error::DegenerateSimplex { det: normalized })?;
        Ok(Self { vertices, edge_inverse })
    }

    /// The corner simplex `co{0, e_1, ..., e_n}`.
    pub fn corner(n: usize) -> Self {
        let mut vertices = vec![Point::zeros(n)];
        for i in 0..n {
            let mut e = Point::zeros(n);
            e[i] = 1.0;
            vertices.push(e);
        }
        Self::new(vertices).expect("corner simplex is nondegenerate")
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// The maximal face opposite vertex `i`.
    pub fn face(&self, i: usize) -> Result<Face> {
        if i >= self.vertices.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.vertices.len() });
        }
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        Ok(Face { omitted: i, vertices })
    }

    pub fn faces(&self) -> Vec<Face> {
        (0..self.vertices.len()).map(|i| self.face(i).unwrap()).collect()
    }

    /// Weights `l` with `sum l = 1` and `sum l_i a_i = u`.
    pub fn barycentric_coords(&self, u: &Point) -> Vec<f64> {
        let n = self.dim();
        let rel = u - &self.vertices[n];
        let head = &self.edge_inverse * rel;
        let mut coords: Vec<f64> = head.iter().copied().collect();
        coords.push(1.0 - coords.iter().sum::<f64>());
        coords
    }

    pub fn from_barycentric(&self, weights: &[f64]) -> Point {
        let mut p = Point::zeros(self.dim());
        for (w, v) in weights.iter().zip(&self.vertices) {
            p.axpy(*w, v, 1.0);
        }
        p
    }

    pub fn contains(&self, u: &Point, tol: f64) -> bool {
        u.len() == self.dim() && self.barycentric_coords(u).iter().all(|&l| l >= -tol)
    }

    /// Nearest point of the simplex to `u`.
    pub fn project(&self, u: &Point) -> Point {
        nearest_in_hull(&self.vertices, u).expect("simplex projection")
    }

    pub fn barycenter(&self) -> Point {
        let mut b = Point::zeros(self.dim());
        for v in &self.vertices {
            b += v;
        }
        b / self.vertices.len() as f64
    }

    /// Largest vertex-to-vertex distance, which is the diameter of a simplex.
    pub fn diameter(&self) -> f64 {
        point::diameter(&self.vertices)
    }

    /// Smallest distance from the barycenter to a maximal face.
    pub fn min_face_distance(&self) -> f64 {
        let b = self.barycenter();
        self.faces()
            .iter()
            .map(|f| point::distance(&b, &f.project(&b)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Facet inequalities `n_i . x <= b_i` (unit outward normals), one per
    /// face in face order. Their intersection is the simplex.
    pub fn facet_halfspaces(&self) -> Vec<(Point, f64)> {
        let n = self.dim();
        // Barycentric coordinate i is the affine function g_i . x + h_i.
        let mut grads: Vec<Point> = (0..n).map(|i| self.edge_inverse.row(i).transpose()).collect();
        let mut sum = Point::zeros(n);
        for g in &grads {
            sum += g;
        }
        grads.push(-sum);
        grads
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                // lambda_i(a_j) = 0 for any vertex j != i
                let j = if i == 0 { 1 } else { 0 };
                let h = -g.dot(&self.vertices[j]);
                let norm = g.norm();
                (-&g / norm, h / norm)
            })
            .collect()
    }
}

/// The maximal face `S^i = co{a_j : j != i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    omitted: usize,
    vertices: Vec<Point>,
}

impl Face {
    pub fn omitted_index(&self) -> usize {
        self.omitted
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn project(&self, u: &Point) -> Point {
        // A face has at most n affinely independent vertices; the corral
        // method cannot stall on it.
        nearest_in_hull(&self.vertices, u).expect("face projection")
    }

    pub fn diameter(&self) -> f64 {
        point::diameter(&self.vertices)
    }
}
