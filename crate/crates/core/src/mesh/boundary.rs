//! Ordered boundary node chains with lumped arc-length weights.
//!
//! The weights drive boundary integrals: each node carries half the sum of
//! its adjacent segment lengths. On tube walls the segment length is the true
//! circular arc length (the circle metadata makes this exact); elsewhere it
//! is the straight segment length.

use super::{BoundaryTag, MeshError, P2Mesh};
use crate::geom::{dist, sub};
use std::collections::BTreeMap;

/// Vertex nodes along one tagged boundary piece, ordered along the boundary.
#[derive(Debug, Clone)]
pub struct BoundaryChain {
    pub tag: BoundaryTag,
    /// Vertex indices in walk order.
    pub nodes: Vec<usize>,
    /// Lumped arc-length weight per node (same order as `nodes`).
    pub weights: Vec<f64>,
    /// True for a closed loop (first node adjacent to last).
    pub closed: bool,
    /// Total boundary length of the chain.
    pub total_length: f64,
}

/// Collects the vertices carrying `tag` as an ordered chain with weights.
pub fn boundary_nodes(p2: &P2Mesh, tag: BoundaryTag) -> Result<BoundaryChain, MeshError> {
    let mesh = &p2.base;
    let edges: Vec<[usize; 2]> =
        mesh.edges_with_tag(tag).map(|e| e.vertices).collect();
    if edges.is_empty() {
        return Err(MeshError::EmptySelection(tag));
    }

    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &edges {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    for (v, nbrs) in &adj {
        if nbrs.len() > 2 {
            return Err(MeshError::Topology(format!(
                "boundary vertex {v} has {} edges tagged {tag}",
                nbrs.len()
            )));
        }
    }

    let endpoints: Vec<usize> =
        adj.iter().filter(|(_, n)| n.len() == 1).map(|(&v, _)| v).collect();
    let closed = endpoints.is_empty();
    let start = if closed {
        // Closed loop: start at the smallest vertex index.
        *adj.keys().next().unwrap()
    } else {
        if endpoints.len() != 2 {
            return Err(MeshError::Topology(format!(
                "edges tagged {tag} form {} open chains",
                endpoints.len() / 2
            )));
        }
        // Deterministic: start at the endpoint with the smaller coordinate.
        let (a, b) = (endpoints[0], endpoints[1]);
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
        if (pa[0], pa[1]) <= (pb[0], pb[1]) {
            a
        } else {
            b
        }
    };

    let mut nodes = vec![start];
    let mut prev = usize::MAX;
    let mut current = start;
    loop {
        let nbrs = &adj[&current];
        let next = if nbrs.len() == 1 {
            nbrs[0]
        } else {
            let mut candidates: Vec<usize> = nbrs.iter().copied().filter(|&n| n != prev).collect();
            candidates.sort_unstable();
            candidates[0]
        };
        if next == start {
            break;
        }
        nodes.push(next);
        prev = current;
        current = next;
        if !closed && adj[&current].len() == 1 && current != start {
            break;
        }
        if nodes.len() > edges.len() + 1 {
            return Err(MeshError::Topology(format!(
                "edges tagged {tag} do not form a single chain"
            )));
        }
    }
    if (closed && nodes.len() != edges.len()) || (!closed && nodes.len() != edges.len() + 1) {
        return Err(MeshError::Topology(format!(
            "edges tagged {tag} are disconnected"
        )));
    }

    // Segment lengths: exact arcs on tube walls, straight elsewhere.
    let circle = match tag {
        BoundaryTag::TubeWall(i) => Some(*mesh.tube_circles.get(&i).ok_or_else(|| {
            MeshError::Geometry(format!("tube {i} has no circle metadata"))
        })?),
        _ => None,
    };
    let seg_len = |a: usize, b: usize| -> f64 {
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
        match circle {
            Some(c) => {
                let u = sub(pa, c.center);
                let v = sub(pb, c.center);
                let ang = crate::geom::cross(u, v).atan2(crate::geom::dot(u, v)).abs();
                c.radius * ang
            }
            None => dist(pa, pb),
        }
    };

    let n = nodes.len();
    let mut weights = vec![0.0; n];
    let mut total = 0.0;
    let n_segs = if closed { n } else { n - 1 };
    for s in 0..n_segs {
        let (a, b) = (s, (s + 1) % n);
        let len = seg_len(nodes[a], nodes[b]);
        total += len;
        weights[a] += 0.5 * len;
        weights[b] += 0.5 * len;
    }

    Ok(BoundaryChain { tag, nodes, weights, closed, total_length: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{enrich_p2, BoundaryEdge, Circle, Mesh, SideTags};
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    /// Fan triangulation of a disk: rim tagged as a tube wall.
    fn disk_mesh(n: usize) -> Mesh {
        let r = 0.5;
        let mut vertices = vec![[0.0, 0.0]];
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            vertices.push([r * th.cos(), r * th.sin()]);
        }
        let mut triangles = Vec::new();
        let mut boundary_edges = Vec::new();
        for k in 0..n {
            let (a, b) = (1 + k, 1 + (k + 1) % n);
            triangles.push([0, a, b]);
            boundary_edges.push(BoundaryEdge { vertices: [a, b], tag: BoundaryTag::TubeWall(1) });
        }
        Mesh {
            vertices,
            triangles,
            boundary_edges,
            tube_circles: BTreeMap::from([(1, Circle { center: [0.0, 0.0], radius: r })]),
        }
    }

    #[test]
    fn full_circle_weights_are_uniform_and_sum_to_pi() {
        let n = 12;
        let p2 = enrich_p2(disk_mesh(n)).unwrap();
        let chain = boundary_nodes(&p2, BoundaryTag::TubeWall(1)).unwrap();
        assert!(chain.closed);
        assert_eq!(chain.nodes.len(), n);
        for &w in &chain.weights {
            assert!((w - PI / n as f64).abs() < 1e-14);
        }
        let sum: f64 = chain.weights.iter().sum();
        assert!((sum - PI).abs() < 1e-13);
    }

    #[test]
    fn inlet_with_three_nodes_has_trapezoid_weights() {
        let p2 = enrich_p2(crate::mesh::unit_square_tri(2, SideTags::default())).unwrap();
        let chain = boundary_nodes(&p2, BoundaryTag::Inlet).unwrap();
        assert!(!chain.closed);
        assert_eq!(chain.nodes.len(), 3);
        assert_eq!(chain.weights, vec![0.25, 0.5, 0.25]);
        assert!((chain.total_length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn missing_tag_is_empty_selection() {
        let p2 = enrich_p2(crate::mesh::two_triangle_square()).unwrap();
        match boundary_nodes(&p2, BoundaryTag::TubeWall(3)).unwrap_err() {
            MeshError::EmptySelection(BoundaryTag::TubeWall(3)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
