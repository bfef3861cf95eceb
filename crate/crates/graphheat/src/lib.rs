//! Heat kernels on compact metric graphs with Kirchhoff-Neumann vertex
//! conditions.
//!
//! A metric graph is a combinatorial graph whose edges carry positive
//! lengths and are treated as one-dimensional segments glued at the
//! vertices.  The Laplacian acts as `-d²/dx²` on each edge, subject to
//! continuity and vanishing sum of outward derivatives at every vertex.
//! This crate evaluates the heat kernel `H(t, q1, q2)` of that operator
//! by two independent routes and cross-checks everything between them:
//!
//! * **Path sums** ([`heat`]): `H` is a Gaussian sum over paths between
//!   the evaluation points, each path weighted by a product of vertex
//!   scattering coefficients ([`paths`]).  Truncation errors carry
//!   rigorous, computable bounds, so every kernel value is certified.
//! * **Eigenfunction expansions** ([`spectral`]): eigenvalues and
//!   per-edge eigenfunction amplitudes from closed-form families, from
//!   adjacency spectra of completely symmetric graphs, and from a
//!   numerical secular solver on the bond scattering matrix.
//!
//! On top of the kernel the crate implements the heat trace over
//! primitive cycles, an edge-localized trace formula, local Weyl
//! statistics, small-time vertex asymptotics, and closed-form diagonal
//! kernels for intervals, stars, flowers, and completely symmetric
//! graphs ([`trace`], [`closed_forms`]).
//!
//! Units: edge coordinates and path lengths are in the graph metric,
//! time has units of length², kernel values have units of 1/length.
//!
//! The `graphheat` binary exposes the library as a CLI emitting CSV or
//! JSON; see the crate README.

pub mod closed_forms;
pub mod graph;
pub mod heat;
pub mod ksum;
pub mod paths;
pub mod quad;
pub mod spectral;
pub mod trace;
pub mod verify;
pub mod zoo;

pub use graph::{GraphError, GraphPoint, MetricGraph};
pub use heat::{HeatError, KernelValue, Truncation};
pub use paths::PathError;
pub use spectral::{EigenBasis, Spectrum, SpectralError};

/// Any error produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Symmetry(#[from] closed_forms::SymmetryError),
}
