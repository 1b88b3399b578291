//! Structured test meshes: uniform triangulations of the unit square.

use super::{BoundaryEdge, BoundaryTag, Mesh};
use std::collections::BTreeMap;

/// Boundary tags assigned to the four sides of a structured square mesh.
#[derive(Debug, Clone, Copy)]
pub struct SideTags {
    pub left: BoundaryTag,
    pub right: BoundaryTag,
    pub bottom: BoundaryTag,
    pub top: BoundaryTag,
}

impl Default for SideTags {
    fn default() -> Self {
        SideTags {
            left: BoundaryTag::Inlet,
            right: BoundaryTag::Outlet,
            bottom: BoundaryTag::Symmetry,
            top: BoundaryTag::Symmetry,
        }
    }
}

/// Uniform `n x n` triangulation of the unit square (2n^2 triangles).
pub fn unit_square_tri(n: usize, tags: SideTags) -> Mesh {
    assert!(n >= 1);
    let h = 1.0 / n as f64;
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * h, j as f64 * h]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v01, v11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    let mut boundary_edges = Vec::with_capacity(4 * n);
    for i in 0..n {
        boundary_edges.push(BoundaryEdge { vertices: [idx(i, 0), idx(i + 1, 0)], tag: tags.bottom });
        boundary_edges.push(BoundaryEdge { vertices: [idx(i, n), idx(i + 1, n)], tag: tags.top });
        boundary_edges.push(BoundaryEdge { vertices: [idx(0, i), idx(0, i + 1)], tag: tags.left });
        boundary_edges.push(BoundaryEdge { vertices: [idx(n, i), idx(n, i + 1)], tag: tags.right });
    }
    Mesh { vertices, triangles, boundary_edges, tube_circles: BTreeMap::new() }
}

/// The smallest valid mesh: the unit square split into two triangles.
pub fn two_triangle_square() -> Mesh {
    unit_square_tri(1, SideTags::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_counts_and_area() {
        let m = unit_square_tri(4, SideTags::default());
        assert_eq!(m.n_vertices(), 25);
        assert_eq!(m.n_triangles(), 32);
        assert_eq!(m.boundary_edges.len(), 16);
        assert!((m.total_area() - 1.0).abs() < 1e-14);
    }
}
