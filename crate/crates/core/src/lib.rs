//! Coupled FEM-BEM solver for transient interaction of a thermo-piezoelectric
//! solid with a surrounding compressible fluid.
//!
//! The solid occupies a bounded tetrahedralized domain; the unbounded fluid is
//! eliminated through boundary integral operators on the wet surface, so each
//! complex frequency `s` yields one bounded coupled linear system. Time-domain
//! solutions are synthesized from the per-frequency solves by convolution
//! quadrature. A verification layer audits the algebraic identities and growth
//! bounds the formulation is built on (skew cancellation, coercivity of the
//! scaled form, jump relations, symbol growth exponents, causality).
//!
//! Module map:
//! - [`mesh`]: tetrahedral volume meshes with matched watertight boundary
//!   triangulations, shipped primitives and uniform refinement.
//! - [`kernel`]: the complex-frequency fundamental solution and the regular /
//!   singular quadrature rules used by all surface integrals.
//! - [`constitutive`]: thermo-piezoelectric constitutive algebra.
//! - [`laplace`]: Laplace parameter, material constants, discrete energy norms
//!   and their parameter-dependent equivalences.
//! - [`interior`]: P1 finite element blocks of the interior weak form.
//! - [`boundary`]: Galerkin boundary operators, layer potentials, sphere
//!   oracle, Calderon diagnostics.
//! - [`coupled`]: assembly and solution of the full five-field block system
//!   plus its stability diagnostics.
//! - [`cq`]: convolution quadrature engine, symbol index estimation and
//!   time-domain bound audits.
//! - [`io`]: config files, reports, time-series output.
//! - [`verify`]: named verification suites driven by the CLI.

pub mod boundary;
pub mod constitutive;
pub mod coupled;
pub mod cq;
pub mod error;
pub mod interior;
pub mod io;
pub mod kernel;
pub mod laplace;
pub mod linalg;
pub mod mesh;
pub mod verify;

pub use error::{Error, Result};
pub use laplace::{LaplaceParameter, MaterialParams};
pub use mesh::CoupledMesh;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
