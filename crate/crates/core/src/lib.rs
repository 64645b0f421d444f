//! Analytical evaluation of the single-layer, double-layer, adjoint double-layer
//! and hypersingular potentials of the Laplace and Helmholtz kernels over flat
//! triangles carrying polynomial densities.
//!
//! The surface integral is reduced by the divergence theorem to line integrals
//! over the three edges plus a point term at the projection of the observation
//! point. Every edge integral is obtained from tables of closed-form primitives
//! filled by recurrences, so the cost of a full monomial table is independent
//! of how close the observation point sits to the element.

pub mod assembly;
pub mod elemint;
pub mod error;
pub mod geometry;
pub mod helmholtz;
pub mod kappa;
pub mod laplace;
pub mod oracle;
pub mod shapefn;
pub mod table;

mod gauss;

pub use assembly::{
    evaluate_monomials, select_method, shape_potentials, EvalMeta, EvalRequest, HelmholtzRoute,
    Kernel, Method, MonomialPotentials, PotentialQuad,
};
pub use error::{Error, Result};
pub use geometry::{ElementGeometry, Location, Projection};
pub use shapefn::{MonomialExpansion, ShapeSet};
pub use table::MonomialTable;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type C64 = num_complex::Complex64;
