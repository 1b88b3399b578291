//! Steady laminar cross-flow around in-line and staggered tube bundles,
//! transient oxygen transport, and oxide-film growth on the tube walls.
//!
//! The crate is organized bottom-up:
//!
//! * [`mesh`] — triangle meshes, MSH ingestion, P2 enrichment, boundary chains;
//! * [`meshgen`] — parametric bundle geometries and Delaunay refinement;
//! * [`fem`] — reference elements, quadrature, sparse assembly;
//! * [`linalg`] — sparse LU and GMRES solves with verified residuals;
//! * [`flow`] — steady Navier–Stokes on Taylor–Hood elements (Newton);
//! * [`oxidation`] — Crank–Nicolson oxygen transport coupled to film growth;
//! * [`postproc`] — streamfunction, midline profiles, film statistics.
//!
//! All quantities are dimensionless: lengths are scaled by the tube diameter,
//! velocities by the inlet speed, concentrations by the inlet concentration.

pub mod fem;
pub mod flow;
pub mod geom;
pub mod linalg;
pub mod mesh;
pub mod meshgen;
pub mod oxidation;
pub mod postproc;
