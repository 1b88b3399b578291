//! Mesh integrity checks and the quality report.

use super::{BoundaryTag, Mesh, ON_CIRCLE_TOL};
use crate::geom::{dist, sub};
use std::collections::{BTreeMap, HashMap};

/// Summary statistics plus a list of violated invariants (empty when clean).
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub n_vertices: usize,
    pub n_triangles: usize,
    pub n_boundary_edges: usize,
    pub area_min: f64,
    pub area_max: f64,
    pub area_total: f64,
    pub min_angle_deg: f64,
    pub boundary_loops: usize,
    pub edges_per_tag: BTreeMap<BoundaryTag, usize>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Checks every `Mesh` invariant and reports statistics.
pub fn validate(mesh: &Mesh) -> ValidationReport {
    let mut failures = Vec::new();
    let mut area_min = f64::INFINITY;
    let mut area_max = f64::NEG_INFINITY;
    let mut min_angle = f64::INFINITY;

    for t in 0..mesh.n_triangles() {
        let area = 0.5 * mesh.area2(t);
        if area <= 0.0 {
            failures.push(format!("triangle {t} has nonpositive area {area:e}"));
        }
        area_min = area_min.min(area);
        area_max = area_max.max(area);
        let [a, b, c] = mesh.triangles[t];
        let pts = [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]];
        for k in 0..3 {
            let u = sub(pts[(k + 1) % 3], pts[k]);
            let v = sub(pts[(k + 2) % 3], pts[k]);
            let cosang = crate::geom::dot(u, v) / (crate::geom::norm(u) * crate::geom::norm(v));
            min_angle = min_angle.min(cosang.clamp(-1.0, 1.0).acos());
        }
    }

    // Edge -> adjacent triangle count.
    let mut edge_tris: HashMap<(usize, usize), usize> = HashMap::new();
    for tri in &mesh.triangles {
        for k in 0..3 {
            *edge_tris.entry(sorted(tri[k], tri[(k + 1) % 3])).or_insert(0) += 1;
        }
    }

    let mut edges_per_tag: BTreeMap<BoundaryTag, usize> = BTreeMap::new();
    let mut tagged: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
    for (i, e) in mesh.boundary_edges.iter().enumerate() {
        let key = sorted(e.vertices[0], e.vertices[1]);
        *edges_per_tag.entry(e.tag).or_insert(0) += 1;
        if let Some(prev) = tagged.insert(key, e.tag) {
            failures.push(format!(
                "boundary edge {:?} tagged twice ({prev} and {})",
                e.vertices, e.tag
            ));
        }
        match edge_tris.get(&key) {
            Some(1) => {}
            Some(n) => failures.push(format!(
                "boundary edge {i} {:?} belongs to {n} triangles",
                e.vertices
            )),
            None => failures.push(format!(
                "boundary edge {i} {:?} is not an edge of any triangle",
                e.vertices
            )),
        }
    }
    for (&key, &n) in &edge_tris {
        if n == 1 && !tagged.contains_key(&key) {
            failures.push(format!("untagged boundary edge {key:?}"));
        }
        if n > 2 {
            failures.push(format!("edge {key:?} shared by {n} triangles"));
        }
    }

    // Boundary loops: every boundary vertex must have degree 2 in the
    // boundary-edge graph; count connected components.
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in &mesh.boundary_edges {
        adj.entry(e.vertices[0]).or_default().push(e.vertices[1]);
        adj.entry(e.vertices[1]).or_default().push(e.vertices[0]);
    }
    for (&v, nbrs) in &adj {
        if nbrs.len() != 2 {
            failures.push(format!("boundary vertex {v} has degree {}", nbrs.len()));
        }
    }
    let mut seen: HashMap<usize, bool> = adj.keys().map(|&v| (v, false)).collect();
    let mut loops = 0usize;
    let mut order: Vec<usize> = adj.keys().copied().collect();
    order.sort_unstable();
    for start in order {
        if seen[&start] {
            continue;
        }
        loops += 1;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if std::mem::replace(seen.get_mut(&v).unwrap(), true) {
                continue;
            }
            for &w in &adj[&v] {
                if !seen[&w] {
                    stack.push(w);
                }
            }
        }
    }

    // Tube-wall vertices must lie on their circle; tube indices must have
    // circle metadata.
    for e in &mesh.boundary_edges {
        if let BoundaryTag::TubeWall(i) = e.tag {
            match mesh.tube_circles.get(&i) {
                None => {
                    failures.push(format!("tube {i} has tagged edges but no circle metadata"));
                }
                Some(c) => {
                    for &v in &e.vertices {
                        let d = (dist(mesh.vertices[v], c.center) - c.radius).abs();
                        if d > ON_CIRCLE_TOL {
                            failures.push(format!(
                                "vertex {v} off tube {i} circle by {d:.3e}"
                            ));
                        }
                    }
                }
            }
        }
    }
    failures.dedup();

    ValidationReport {
        n_vertices: mesh.n_vertices(),
        n_triangles: mesh.n_triangles(),
        n_boundary_edges: mesh.boundary_edges.len(),
        area_min,
        area_max,
        area_total: mesh.total_area(),
        min_angle_deg: min_angle.to_degrees(),
        boundary_loops: loops,
        edges_per_tag,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::two_triangle_square;

    #[test]
    fn two_triangle_square_is_clean() {
        let report = validate(&two_triangle_square());
        assert!(report.is_ok(), "{:?}", report.failures);
        assert_eq!(report.boundary_loops, 1);
        assert!((report.min_angle_deg - 45.0).abs() < 1e-12);
        assert!((report.area_total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_area_triangle_is_flagged() {
        let mut mesh = two_triangle_square();
        // Collapse triangle 1 onto a line.
        mesh.triangles[1] = [0, 2, 2];
        let report = validate(&mesh);
        assert!(!report.is_ok());
        assert!(report.failures.iter().any(|f| f.contains("triangle 1")));
    }
}
