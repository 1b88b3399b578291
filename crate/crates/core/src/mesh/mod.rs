//! Triangle mesh data model.
//!
//! A [`Mesh`] is an unstructured triangulation of the fluid strip with tagged
//! boundary edges. Tube walls carry circle metadata so that curved-boundary
//! operations (P2 node projection, arc-length weights) are exact.

mod boundary;
mod msh;
mod p2;
mod structured;
mod validate;

pub use boundary::{boundary_nodes, BoundaryChain};
pub use msh::{parse_msh, TagMap};
pub use p2::{enrich_p2, P2Mesh};
pub use structured::{two_triangle_square, unit_square_tri, SideTags};
pub use validate::{validate, ValidationReport};

use crate::geom::{dist, Point};
use std::collections::BTreeMap;
use thiserror::Error;

/// Tube walls have radius 1/2 in tube-diameter units.
pub const TUBE_RADIUS: f64 = 0.5;

/// Distance tolerance for "vertex lies on its tube circle".
pub const ON_CIRCLE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown physical tag {tag} at line {line}")]
    Tag { tag: i32, line: usize },
    #[error("non-manifold or untagged boundary: {0}")]
    Topology(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("empty selection: no boundary edges tagged {0:?}")]
    EmptySelection(BoundaryTag),
    #[error("mesh validation failed: {0:?}")]
    Invalid(Vec<String>),
}

/// Boundary classification. Tube indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryTag {
    Inlet,
    Outlet,
    Symmetry,
    TubeWall(u32),
}

impl std::fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryTag::Inlet => write!(f, "inlet"),
            BoundaryTag::Outlet => write!(f, "outlet"),
            BoundaryTag::Symmetry => write!(f, "symmetry"),
            BoundaryTag::TubeWall(i) => write!(f, "tube{i}"),
        }
    }
}

/// A tagged boundary edge between two vertex indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: BoundaryTag,
}

/// Center and radius of one tube circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    /// Radial projection onto the circle.
    pub fn project(&self, p: Point) -> Point {
        let d = [p[0] - self.center[0], p[1] - self.center[1]];
        let r = d[0].hypot(d[1]);
        if r == 0.0 {
            // Degenerate: caller guards against projecting the center itself.
            return [self.center[0] + self.radius, self.center[1]];
        }
        let s = self.radius / r;
        [self.center[0] + d[0] * s, self.center[1] + d[1] * s]
    }

    pub fn distance_to(&self, p: Point) -> f64 {
        (dist(p, self.center) - self.radius).abs()
    }
}

/// Unstructured triangulation with tagged boundary.
#[derive(Debug, Clone)]
pub struct Mesh {
    /// Vertex coordinates, dimensionless (tube diameter = 1).
    pub vertices: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// Tagged boundary edges; each belongs to exactly one triangle.
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Circle metadata per tube index (1-based key).
    pub tube_circles: BTreeMap<u32, Circle>,
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Twice the signed area of triangle `t`.
    pub fn area2(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        crate::geom::signed_area2(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Reorders any clockwise triangle to positive signed area.
    pub fn orient_ccw(&mut self) {
        for t in 0..self.triangles.len() {
            if self.area2(t) < 0.0 {
                self.triangles[t].swap(1, 2);
            }
        }
    }

    /// Sum of triangle areas.
    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| 0.5 * self.area2(t)).sum()
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Boundary edges carrying `tag`.
    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryEdge> {
        self.boundary_edges.iter().filter(move |e| e.tag == tag)
    }

    /// Largest tube index referenced by the boundary tags.
    pub fn n_tubes(&self) -> u32 {
        self.boundary_edges
            .iter()
            .filter_map(|e| match e.tag {
                BoundaryTag::TubeWall(i) => Some(i),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Fits tube circles from tagged wall vertices (least-squares Kasa fit).
    ///
    /// Used after MSH ingestion where circle metadata is not in the file.
    pub fn fit_tube_circles(&mut self) -> Result<(), MeshError> {
        let mut per_tube: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for e in &self.boundary_edges {
            if let BoundaryTag::TubeWall(i) = e.tag {
                per_tube.entry(i).or_default().extend(e.vertices);
            }
        }
        for (tube, mut verts) in per_tube {
            verts.sort_unstable();
            verts.dedup();
            if verts.len() < 3 {
                return Err(MeshError::Geometry(format!(
                    "tube {tube} has only {} wall vertices; cannot fit a circle",
                    verts.len()
                )));
            }
            let circle = fit_circle(verts.iter().map(|&v| self.vertices[v]))?;
            self.tube_circles.insert(tube, circle);
        }
        Ok(())
    }
}

/// Algebraic (Kasa) circle fit; exact when the points lie on a circle.
fn fit_circle(points: impl Iterator<Item = Point>) -> Result<Circle, MeshError> {
    // Normal equations for x^2 + y^2 = a x + b y + c.
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    let mut n = 0usize;
    for p in points {
        let row = [p[0], p[1], 1.0];
        let z = p[0] * p[0] + p[1] * p[1];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            rhs[i] += row[i] * z;
        }
        n += 1;
    }
    if n < 3 {
        return Err(MeshError::Geometry("circle fit needs at least 3 points".into()));
    }
    let sol = solve3(m, rhs)
        .ok_or_else(|| MeshError::Geometry("degenerate circle fit (collinear points)".into()))?;
    let center = [0.5 * sol[0], 0.5 * sol[1]];
    let r2 = sol[2] + center[0] * center[0] + center[1] * center[1];
    if r2 <= 0.0 {
        return Err(MeshError::Geometry("circle fit produced nonpositive radius".into()));
    }
    Ok(Circle { center, radius: r2.sqrt() })
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for k in 0..3 {
        let piv = (k..3).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))?;
        if m[piv][k].abs() < 1e-300 {
            return None;
        }
        m.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..3 {
            let f = m[i][k] / m[k][k];
            for j in k..3 {
                m[i][j] -= f * m[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let mut s = b[k];
        for j in k + 1..3 {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_fit_recovers_exact_circle() {
        let c = Circle { center: [3.0, 0.0], radius: 0.5 };
        let pts: Vec<Point> = (0..7)
            .map(|k| {
                let th = std::f64::consts::PI * k as f64 / 6.0;
                [c.center[0] + c.radius * th.cos(), c.center[1] + c.radius * th.sin()]
            })
            .collect();
        let fit = fit_circle(pts.into_iter()).unwrap();
        assert!((fit.center[0] - 3.0).abs() < 1e-12);
        assert!(fit.center[1].abs() < 1e-12);
        assert!((fit.radius - 0.5).abs() < 1e-12);
    }

    #[test]
    fn orient_ccw_fixes_clockwise_triangle() {
        let mut mesh = Mesh {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 2, 1]],
            boundary_edges: vec![],
            tube_circles: BTreeMap::new(),
        };
        assert!(mesh.area2(0) < 0.0);
        mesh.orient_ccw();
        assert!(mesh.area2(0) > 0.0);
    }
}
