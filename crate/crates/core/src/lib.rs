//! Reconstruction of a real symmetric matrix from the spectra of its nested
//! leading principal submatrices plus a set of sign indicators.
//!
//! The library is organized around one inductive step: given the n x n
//! leading block together with the spectra of the n x n and (n+1) x (n+1)
//! blocks and n signs, recover the (n+1)-st row/column. Chaining steps from
//! the 1 x 1 block upward rebuilds the full matrix. Variants cover banded
//! matrices (where fewer unknowns per step allow reconstruction from far
//! fewer signs, at the price of a finite search), degenerate spectra, and
//! sliding-window schemes that replace the deep nested spectra with many
//! small overlapping ones.
//!
//! Modules:
//! - [`mat`]: symmetric matrix storage (packed upper triangle) and views.
//! - [`eig`]: deterministic Jacobi eigensolver with a fixed eigenvector
//!   sign gauge.
//! - [`spectral`]: spectra, interlacing and regularity checks, sign
//!   indicators, and the per-step scalar invariants.
//! - [`cauchy`]: closed-form Cauchy-matrix machinery used by the step
//!   solver, plus a numerical identity suite.

pub mod banded;
pub mod cauchy;
pub mod degenerate;
pub mod eig;
pub mod error;
pub mod io;
pub mod mat;
pub mod oracle;
pub mod sliding;
pub mod spectral;
pub mod telescopic;

pub use error::{Error, Result};
