//! Element-loop assembly of the volume and boundary forms used by the flow
//! and transport solvers, plus Dirichlet elimination.
//!
//! Quadrature degrees: 2 for P1 mass/stiffness, 4 for P2 mass/diffusion,
//! 5 for convection (exact for affine elements).

use super::quadrature::{edge_rule, triangle_rule};
use super::shape;
use super::sparse::CsrMatrix;
use super::{ElemGeom, FemError};
use crate::geom::Point;
use crate::mesh::{BoundaryTag, P2Mesh};

/// Velocity evaluated at quadrature points, either a finite-element field or
/// an analytic function.
pub trait VelocityField {
    fn eval(&self, elem: usize, bary: [f64; 3], xy: Point) -> [f64; 2];
}

/// Analytic velocity given as a closure of position.
pub struct AnalyticVelocity<F: Fn(Point) -> [f64; 2]>(pub F);

impl<F: Fn(Point) -> [f64; 2]> VelocityField for AnalyticVelocity<F> {
    fn eval(&self, _elem: usize, _bary: [f64; 3], xy: Point) -> [f64; 2] {
        (self.0)(xy)
    }
}

/// A boundary edge oriented so the interior lies on its left, with the
/// triangle that owns it.
#[derive(Debug, Clone, Copy)]
pub struct OrientedEdge {
    pub verts: [usize; 2],
    pub tag: BoundaryTag,
    pub tri: usize,
}

impl OrientedEdge {
    /// Outward unit normal and edge length.
    pub fn normal_and_length(&self, p2: &P2Mesh) -> ([f64; 2], f64) {
        let a = p2.base.vertices[self.verts[0]];
        let b = p2.base.vertices[self.verts[1]];
        let d = [b[0] - a[0], b[1] - a[1]];
        let len = d[0].hypot(d[1]);
        ([d[1] / len, -d[0] / len], len)
    }
}

/// Boundary edges in interior-on-the-left orientation.
pub fn oriented_boundary(p2: &P2Mesh) -> Vec<OrientedEdge> {
    use std::collections::HashMap;
    let mesh = &p2.base;
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            directed.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    mesh.boundary_edges
        .iter()
        .map(|e| {
            let (a, b) = (e.vertices[0], e.vertices[1]);
            if let Some(&t) = directed.get(&(a, b)) {
                OrientedEdge { verts: [a, b], tag: e.tag, tri: t }
            } else if let Some(&t) = directed.get(&(b, a)) {
                OrientedEdge { verts: [b, a], tag: e.tag, tri: t }
            } else {
                // validate() reports this; keep assembly total.
                OrientedEdge { verts: [a, b], tag: e.tag, tri: 0 }
            }
        })
        .collect()
}

fn elem_geom(p2: &P2Mesh, t: usize) -> Result<ElemGeom, FemError> {
    let [a, b, c] = p2.base.triangles[t];
    ElemGeom::new(t, [p2.base.vertices[a], p2.base.vertices[b], p2.base.vertices[c]])
}

/// P1 mass matrix: M_ij = ∫ φ_i φ_j.
pub fn p1_mass(p2: &P2Mesh) -> Result<CsrMatrix, FemError> {
    let n = p2.base.n_vertices();
    let rule = triangle_rule(2);
    let mut trips = Vec::with_capacity(p2.base.n_triangles() * 9);
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.base.triangles[t];
        let mut local = [[0.0f64; 3]; 3];
        for (q, &b) in rule.points.iter().enumerate() {
            let w = rule.weights[q] * g.det_j;
            let v = shape::p1_values(b);
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += w * v[i] * v[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                trips.push((dofs[i], dofs[j], local[i][j]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// P1 stiffness matrix: K_ij = coeff · ∫ ∇φ_i · ∇φ_j.
pub fn p1_stiffness(p2: &P2Mesh, coeff: f64) -> Result<CsrMatrix, FemError> {
    let n = p2.base.n_vertices();
    let mut trips = Vec::with_capacity(p2.base.n_triangles() * 9);
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.base.triangles[t];
        let grads: Vec<[f64; 2]> = shape::p1_ref_grads().iter().map(|&gr| g.grad(gr)).collect();
        let area = 0.5 * g.det_j;
        for i in 0..3 {
            for j in 0..3 {
                let v = coeff * area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                trips.push((dofs[i], dofs[j], v));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// P2 scalar mass matrix.
pub fn p2_mass(p2: &P2Mesh) -> Result<CsrMatrix, FemError> {
    let n = p2.n_p2_nodes();
    let rule = triangle_rule(4);
    let mut trips = Vec::with_capacity(p2.base.n_triangles() * 36);
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.p2_nodes(t);
        let mut local = [[0.0f64; 6]; 6];
        for (q, &b) in rule.points.iter().enumerate() {
            let w = rule.weights[q] * g.det_j;
            let v = shape::p2_values(b);
            for i in 0..6 {
                for j in 0..6 {
                    local[i][j] += w * v[i] * v[j];
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                trips.push((dofs[i], dofs[j], local[i][j]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// P2 scalar stiffness matrix: coeff · ∫ ∇φ_i · ∇φ_j.
pub fn p2_stiffness(p2: &P2Mesh, coeff: f64) -> Result<CsrMatrix, FemError> {
    let n = p2.n_p2_nodes();
    let rule = triangle_rule(4);
    let mut trips = Vec::with_capacity(p2.base.n_triangles() * 36);
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.p2_nodes(t);
        let mut local = [[0.0f64; 6]; 6];
        for (q, &b) in rule.points.iter().enumerate() {
            let w = coeff * rule.weights[q] * g.det_j;
            let grads: Vec<[f64; 2]> = shape::p2_ref_grads(b).iter().map(|&gr| g.grad(gr)).collect();
            for i in 0..6 {
                for j in 0..6 {
                    local[i][j] += w * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                trips.push((dofs[i], dofs[j], local[i][j]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// P1 convection in integrated-by-parts form: C_ij = −∫ φ_j (u · ∇φ_i).
/// Row index is the test function.
pub fn p1_convection(p2: &P2Mesh, vel: &dyn VelocityField) -> Result<CsrMatrix, FemError> {
    let n = p2.base.n_vertices();
    let rule = triangle_rule(5);
    let mut trips = Vec::with_capacity(p2.base.n_triangles() * 9);
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.base.triangles[t];
        let grads: Vec<[f64; 2]> = shape::p1_ref_grads().iter().map(|&gr| g.grad(gr)).collect();
        let mut local = [[0.0f64; 3]; 3];
        for (q, &b) in rule.points.iter().enumerate() {
            let w = rule.weights[q] * g.det_j;
            let v = shape::p1_values(b);
            let u = vel.eval(t, b, g.point(b));
            for i in 0..3 {
                let advect = u[0] * grads[i][0] + u[1] * grads[i][1];
                for j in 0..3 {
                    local[i][j] -= w * v[j] * advect;
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                trips.push((dofs[i], dofs[j], local[i][j]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// Boundary flux term on tagged edges: ∮ (u·n) φ_j φ_i.
pub fn p1_outflow(p2: &P2Mesh, vel: &dyn VelocityField, tags: &[BoundaryTag]) -> Result<CsrMatrix, FemError> {
    let n = p2.base.n_vertices();
    let rule = edge_rule(5);
    let mut trips = Vec::new();
    for edge in oriented_boundary(p2) {
        if !tags.contains(&edge.tag) {
            continue;
        }
        let g = elem_geom(p2, edge.tri)?;
        let (normal, len) = edge.normal_and_length(p2);
        let pa = p2.base.vertices[edge.verts[0]];
        let pb = p2.base.vertices[edge.verts[1]];
        let mut local = [[0.0f64; 2]; 2];
        for (q, &s) in rule.points.iter().enumerate() {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let bary = g.bary_of(x);
            let u = vel.eval(edge.tri, bary, x);
            let un = u[0] * normal[0] + u[1] * normal[1];
            let w = rule.weights[q] * len * un;
            let phi = [1.0 - s, s];
            for i in 0..2 {
                for j in 0..2 {
                    local[i][j] += w * phi[i] * phi[j];
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                trips.push((edge.verts[i], edge.verts[j], local[i][j]));
            }
        }
    }
    // Ensure the full diagonal exists so downstream pattern unions stay simple.
    for i in 0..n {
        trips.push((i, i, 0.0));
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// Consistent Robin edge mass on tagged edges: β ∮ φ_i φ_j.
pub fn p1_robin_edges(p2: &P2Mesh, beta: f64, tags: &[BoundaryTag]) -> Result<CsrMatrix, FemError> {
    let n = p2.base.n_vertices();
    let mut trips = Vec::new();
    for edge in oriented_boundary(p2) {
        if !tags.contains(&edge.tag) {
            continue;
        }
        let (_, len) = edge.normal_and_length(p2);
        // Exact edge mass for P1 traces.
        let m = [[len / 3.0, len / 6.0], [len / 6.0, len / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                trips.push((edge.verts[i], edge.verts[j], beta * m[i][j]));
            }
        }
    }
    for i in 0..n {
        trips.push((i, i, 0.0));
    }
    Ok(CsrMatrix::from_triplets(n, n, &mut trips))
}

/// Volume source ∫ f φ_i for P1 test functions.
pub fn p1_source(p2: &P2Mesh, f: &dyn Fn(Point) -> f64) -> Result<Vec<f64>, FemError> {
    let rule = triangle_rule(5);
    let mut rhs = vec![0.0; p2.base.n_vertices()];
    for t in 0..p2.base.n_triangles() {
        let g = elem_geom(p2, t)?;
        let dofs = p2.base.triangles[t];
        for (q, &b) in rule.points.iter().enumerate() {
            let w = rule.weights[q] * g.det_j;
            let fx = f(g.point(b));
            let v = shape::p1_values(b);
            for i in 0..3 {
                rhs[dofs[i]] += w * fx * v[i];
            }
        }
    }
    Ok(rhs)
}

/// Boundary source ∮ g φ_i over tagged edges, P1 test functions.
pub fn p1_edge_source(
    p2: &P2Mesh,
    g_fun: &dyn Fn(Point) -> f64,
    tags: &[BoundaryTag],
) -> Result<Vec<f64>, FemError> {
    let rule = edge_rule(5);
    let mut rhs = vec![0.0; p2.base.n_vertices()];
    for edge in oriented_boundary(p2) {
        if !tags.contains(&edge.tag) {
            continue;
        }
        let (_, len) = edge.normal_and_length(p2);
        let pa = p2.base.vertices[edge.verts[0]];
        let pb = p2.base.vertices[edge.verts[1]];
        for (q, &s) in rule.points.iter().enumerate() {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let w = rule.weights[q] * len * g_fun(x);
            rhs[edge.verts[0]] += w * (1.0 - s);
            rhs[edge.verts[1]] += w * s;
        }
    }
    Ok(rhs)
}

/// Symmetric Dirichlet elimination: constrained rows and columns are zeroed,
/// the diagonal is set to 1, and the right-hand side absorbs the lifting so
/// the solution reproduces the constrained values exactly.
pub fn apply_dirichlet(
    a: &mut CsrMatrix,
    b: &mut [f64],
    constraints: &[(usize, f64)],
) -> Result<(), FemError> {
    let n = a.nrows();
    let mut value: Vec<Option<f64>> = vec![None; n];
    for &(dof, v) in constraints {
        match value[dof] {
            Some(prev) if (prev - v).abs() > 1e-12 => {
                return Err(FemError::Constraint { dof, a: prev, b: v });
            }
            _ => value[dof] = Some(v),
        }
    }
    for i in 0..n {
        match value[i] {
            Some(vi) => {
                let mut has_diag = false;
                let (cols, vals) = a.row_mut(i);
                for (k, &j) in cols.iter().enumerate() {
                    vals[k] = if j == i {
                        has_diag = true;
                        1.0
                    } else {
                        0.0
                    };
                }
                if !has_diag {
                    return Err(FemError::MissingEntry { row: i, col: i });
                }
                b[i] = vi;
            }
            None => {
                let (cols, vals) = a.row_mut(i);
                let mut shift = 0.0;
                for (k, &j) in cols.iter().enumerate() {
                    if let Some(vj) = value[j] {
                        shift += vals[k] * vj;
                        vals[k] = 0.0;
                    }
                }
                b[i] -= shift;
            }
        }
    }
    Ok(())
}
