//! Reference elements, quadrature, sparse matrices, and assembly.

pub mod assemble;
pub mod quadrature;
pub mod shape;
pub mod sparse;

pub use assemble::{apply_dirichlet, oriented_boundary, AnalyticVelocity, OrientedEdge, VelocityField};
pub use quadrature::{edge_rule, triangle_rule, EdgeRule, QuadratureRule};
pub use sparse::CsrMatrix;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error("degenerate element Jacobian in element {elem}")]
    SingularElement { elem: usize },
    #[error("conflicting Dirichlet constraints on dof {dof}: {a} vs {b}")]
    Constraint { dof: usize, a: f64, b: f64 },
    #[error("matrix pattern is missing required entry ({row}, {col})")]
    MissingEntry { row: usize, col: usize },
}

/// Affine geometry of one triangle.
#[derive(Debug, Clone, Copy)]
pub struct ElemGeom {
    pub verts: [[f64; 2]; 3],
    /// det J = twice the signed area.
    pub det_j: f64,
    /// (J^{-1})^T, mapping reference gradients to physical gradients.
    inv_jt: [[f64; 2]; 2],
}

impl ElemGeom {
    pub fn new(elem: usize, verts: [[f64; 2]; 3]) -> Result<Self, FemError> {
        let d1 = [verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]];
        let d2 = [verts[2][0] - verts[0][0], verts[2][1] - verts[0][1]];
        let det = d1[0] * d2[1] - d1[1] * d2[0];
        let scale = d1[0].abs() + d1[1].abs() + d2[0].abs() + d2[1].abs();
        if det.abs() <= 1e-14 * scale * scale {
            return Err(FemError::SingularElement { elem });
        }
        let inv_jt = [[d2[1] / det, -d1[1] / det], [-d2[0] / det, d1[0] / det]];
        Ok(ElemGeom { verts, det_j: det, inv_jt })
    }

    /// Physical gradient from a reference gradient.
    #[inline]
    pub fn grad(&self, g_ref: [f64; 2]) -> [f64; 2] {
        [
            self.inv_jt[0][0] * g_ref[0] + self.inv_jt[0][1] * g_ref[1],
            self.inv_jt[1][0] * g_ref[0] + self.inv_jt[1][1] * g_ref[1],
        ]
    }

    /// Physical coordinates of a barycentric point.
    #[inline]
    pub fn point(&self, b: [f64; 3]) -> [f64; 2] {
        [
            b[0] * self.verts[0][0] + b[1] * self.verts[1][0] + b[2] * self.verts[2][0],
            b[0] * self.verts[0][1] + b[1] * self.verts[1][1] + b[2] * self.verts[2][1],
        ]
    }

    /// Barycentric coordinates of a physical point.
    pub fn bary_of(&self, p: [f64; 2]) -> [f64; 3] {
        let dp = [p[0] - self.verts[0][0], p[1] - self.verts[0][1]];
        // lambda_ref = J^{-1} dp; inv_jt is the transpose of J^{-1}.
        let l1 = self.inv_jt[0][0] * dp[0] + self.inv_jt[1][0] * dp[1];
        let l2 = self.inv_jt[0][1] * dp[0] + self.inv_jt[1][1] * dp[1];
        [1.0 - l1 - l2, l1, l2]
    }
}
