//! Bound states of one-dimensional potentials confined between two infinite
//! walls.
//!
//! The interval `[a, b]` is cut into `n + 1` equal slabs, the potential is
//! frozen at each slab midpoint, and the Schrödinger equation
//! `psi'' + (E - V) psi = 0` (units with `hbar = 1`, `2m = 1`) is solved
//! exactly slab by slab. Matching value and slope at every interface gives a
//! scalar function of `E` whose zeros are the eigenvalues; these are
//! bracketed by a sign scan and refined by bisection.
//!
//! An independent finite-difference solver lives in [`oracle`] for
//! cross-checks, and [`analytic`] holds the closed-form spectra.

pub mod analytic;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod potentials;
pub mod quantify;
pub mod spectrum;
pub mod wavefun;

pub use error::{Error, Result};
pub use grid::{partition, Discretization};
pub use potentials::{parse_potential, PotentialKind, PotentialSpec, Shape, Walls};
pub use quantify::{quantification, QuantValue};
pub use spectrum::{refine, scan, sign_of, solve, EigenLevel, SolveOptions};
pub use wavefun::{reconstruct, WavefunctionTable};
