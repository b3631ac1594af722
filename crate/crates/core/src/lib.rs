//! Point collocation with mollified piecewise polynomial basis functions.
//!
//! Cell-wise scaled monomials on a polytopic mesh are convolved with a
//! compact spline mollifier. The resulting smooth basis is used to solve
//! Poisson, plane-stress elasticity and biharmonic problems in strong form
//! by overdetermined least-squares collocation.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). The
//! aliases below fix the scalar to `f64`, which is what the studies use.

pub mod basis;
pub mod collocation;
pub mod error;
pub mod geometry;
pub mod mesh;
pub mod mollifier;
pub mod problems;
pub mod scalar;
pub mod study;
pub mod system;

pub use error::{Error, Result};
pub use scalar::{Point, Real};

/// Mesh over `f64`.
pub type Mesh64 = mesh::Mesh<f64>;
/// Basis over `f64`.
pub type BasisSet64 = basis::BasisSet<f64>;
/// Mollifier over `f64`.
pub type Mollifier64 = mollifier::Mollifier<f64>;
/// Problem definition over `f64`.
pub type ProblemCase64 = problems::ProblemCase<f64>;
/// Collocation points over `f64`.
pub type CollocationSet64 = collocation::CollocationSet<f64>;
/// Assembled system over `f64`.
pub type CollocationSystem64 = system::CollocationSystem<f64>;
/// Solution over `f64`.
pub type Solution64 = system::Solution<f64>;
