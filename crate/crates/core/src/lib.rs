//! Exact solution machinery for three particles on a line or circle whose
//! contact interactions follow the g₂ root system: pair collisions of
//! strength `gs` on the six short-root hyperplanes and particle–midpoint
//! collisions of strength `gl` on the six long-root hyperplanes.
//!
//! The crate has two arithmetic backends.  Operator identities (unitarity,
//! the six-factor consistency relations, transfer-operator laws) are checked
//! in exact Gaussian-rational arithmetic at random rational sample points;
//! the Bethe-equation solver and the diagonalization oracle run on complex
//! floats.
//!
//! Module map:
//!
//! - [`weyl`] — the dihedral group of order 12, the twelve roots, chambers,
//!   and the circle-cut prescription.
//! - [`scalar`] — the exact and floating scalar backends plus rational
//!   sampling.
//! - [`operators`] — coefficient vectors, the right-translation realization,
//!   the scattering operators, the propagation recursion, and the identity
//!   catalogue.
//! - [`bethe`] — transfer operators, isotypic sectors, Bethe-equation
//!   solvers, and the convention cross-check.
//! - [`wavefunction`] — pointwise assembly of the eigenfunction and the
//!   boundary-condition / energy / circle-matching verifiers.
//! - [`oracle`] — truncated plane-wave diagonalization on the circle and the
//!   spectrum comparison report.
//! - [`verify`] — the batched exact identity suite used by the CLI and the
//!   acceptance tests.

pub mod bethe;
pub mod operators;
pub mod oracle;
mod par;
pub mod scalar;
pub mod verify;
pub mod wavefunction;
pub mod weyl;

pub use bethe::{BetheSolution, Sector, SectorLabel, SolveError, SolverOptions};
pub use operators::{Coupling, GroupOperator, Momentum};
pub use scalar::{Exact, Scalar};
pub use weyl::{CircleConfig, GroupElement, Root, WeylError};
