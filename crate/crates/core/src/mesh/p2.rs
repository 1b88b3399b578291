//! Quadratic (P2) node enrichment: one node per unique triangle edge.
//!
//! Edge nodes sit at midpoints, except on tube-wall edges where they are
//! projected radially onto the tube circle. The element geometry map stays
//! affine; the projection only moves the degree-of-freedom location.

use super::{BoundaryTag, Mesh, MeshError, ON_CIRCLE_TOL};
use crate::geom::{midpoint, Point};
use std::collections::HashMap;

/// A `Mesh` plus P2 edge nodes with deterministic ordering.
#[derive(Debug, Clone)]
pub struct P2Mesh {
    pub base: Mesh,
    /// Unique undirected edges as sorted vertex pairs, ordered lexicographically.
    pub edges: Vec<[usize; 2]>,
    /// Edge-node coordinates, parallel to `edges`.
    pub edge_nodes: Vec<Point>,
    /// Per triangle, the edge indices of local edges (v0,v1), (v1,v2), (v2,v0).
    pub tri_edges: Vec<[usize; 3]>,
    edge_index: HashMap<[usize; 2], usize>,
}

impl P2Mesh {
    pub fn n_p2_nodes(&self) -> usize {
        self.base.n_vertices() + self.edges.len()
    }

    /// Coordinate of P2 node `n` (vertices first, then edge nodes).
    pub fn p2_coord(&self, n: usize) -> Point {
        let nv = self.base.n_vertices();
        if n < nv {
            self.base.vertices[n]
        } else {
            self.edge_nodes[n - nv]
        }
    }

    /// The six P2 node indices of triangle `t`: vertices then edge nodes of
    /// local edges (v0,v1), (v1,v2), (v2,v0).
    pub fn p2_nodes(&self, t: usize) -> [usize; 6] {
        let [a, b, c] = self.base.triangles[t];
        let nv = self.base.n_vertices();
        let e = self.tri_edges[t];
        [a, b, c, nv + e[0], nv + e[1], nv + e[2]]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.edge_index.get(&key).copied()
    }
}

/// Builds the P2 enrichment of `mesh`.
pub fn enrich_p2(mesh: Mesh) -> Result<P2Mesh, MeshError> {
    let mut keys: Vec<[usize; 2]> = Vec::with_capacity(mesh.n_triangles() * 3 / 2);
    for tri in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            keys.push(if a < b { [a, b] } else { [b, a] });
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let edge_index: HashMap<[usize; 2], usize> =
        keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    let mut tri_edges = Vec::with_capacity(mesh.n_triangles());
    for tri in &mesh.triangles {
        let mut e = [0usize; 3];
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let key = if a < b { [a, b] } else { [b, a] };
            e[k] = edge_index[&key];
        }
        tri_edges.push(e);
    }

    let mut edge_nodes: Vec<Point> = keys
        .iter()
        .map(|&[a, b]| midpoint(mesh.vertices[a], mesh.vertices[b]))
        .collect();

    // Project tube-wall edge nodes onto their circles.
    for e in &mesh.boundary_edges {
        if let BoundaryTag::TubeWall(i) = e.tag {
            let circle = mesh.tube_circles.get(&i).ok_or_else(|| {
                MeshError::Geometry(format!("tube {i} has no circle metadata"))
            })?;
            for &v in &e.vertices {
                if circle.distance_to(mesh.vertices[v]) > ON_CIRCLE_TOL {
                    return Err(MeshError::Geometry(format!(
                        "edge {:?} tagged tube {i} has an endpoint off that circle \
                         (endpoints on different tubes?)",
                        e.vertices
                    )));
                }
            }
            let [a, b] = e.vertices;
            let key = if a < b { [a, b] } else { [b, a] };
            let idx = edge_index[&key];
            edge_nodes[idx] = circle.project(edge_nodes[idx]);
        }
    }

    Ok(P2Mesh { base: mesh, edges: keys, edge_nodes, tri_edges, edge_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{two_triangle_square, BoundaryEdge, Circle};
    use std::collections::BTreeMap;

    #[test]
    fn two_triangle_square_has_nine_p2_nodes() {
        let p2 = enrich_p2(two_triangle_square()).unwrap();
        assert_eq!(p2.edges.len(), 5);
        assert_eq!(p2.n_p2_nodes(), 9);
        // All edge nodes are exact midpoints (no tubes).
        for (e, node) in p2.edges.iter().zip(&p2.edge_nodes) {
            let m = midpoint(p2.base.vertices[e[0]], p2.base.vertices[e[1]]);
            assert_eq!(*node, m);
        }
    }

    #[test]
    fn tube_edge_node_is_projected_radially() {
        // One triangle with an edge on the circle centered at the origin,
        // endpoints at angles 0 and pi/2.
        let r = 0.5f64;
        let mesh = Mesh {
            vertices: vec![[r, 0.0], [0.0, r], [1.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![
                BoundaryEdge { vertices: [0, 1], tag: BoundaryTag::TubeWall(1) },
                BoundaryEdge { vertices: [1, 2], tag: BoundaryTag::Symmetry },
                BoundaryEdge { vertices: [2, 0], tag: BoundaryTag::Symmetry },
            ],
            tube_circles: BTreeMap::from([(1, Circle { center: [0.0, 0.0], radius: r })]),
        };
        let p2 = enrich_p2(mesh).unwrap();
        let idx = p2.edge_index(0, 1).unwrap();
        let node = p2.edge_nodes[idx];
        let expect = [r * (std::f64::consts::FRAC_PI_4).cos(), r * (std::f64::consts::FRAC_PI_4).sin()];
        assert!((node[0] - expect[0]).abs() < 1e-15);
        assert!((node[1] - expect[1]).abs() < 1e-15);
    }

    #[test]
    fn endpoint_off_circle_is_a_geometry_error() {
        let mesh = Mesh {
            vertices: vec![[0.5, 0.0], [0.0, 0.6], [1.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![BoundaryEdge { vertices: [0, 1], tag: BoundaryTag::TubeWall(1) }],
            tube_circles: BTreeMap::from([(1, Circle { center: [0.0, 0.0], radius: 0.5 })]),
        };
        match enrich_p2(mesh).unwrap_err() {
            MeshError::Geometry(_) => {}
            other => panic!("expected GeometryError, got {other:?}"),
        }
    }
}
