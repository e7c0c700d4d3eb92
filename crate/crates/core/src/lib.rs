//! Fusion frames over `R^M`: construction with prescribed frame-operator
//! spectra, spatial and Naimark complements, tight completions, dilation,
//! and measurement/reconstruction.
//!
//! A fusion frame is a finite family of weighted subspaces `{(W_i, v_i)}`
//! of `R^M` such that the operator `S = sum_i v_i^2 P_i` (with `P_i` the
//! orthogonal projection onto `W_i`) is bounded below and above:
//!
//! ```text
//! A |f|^2  <=  sum_i v_i^2 |P_i f|^2  <=  B |f|^2 .
//! ```
//!
//! The optimal bounds `A`, `B` are the extreme eigenvalues of `S`; the frame
//! is tight when `A = B` and Parseval when `A = B = 1`. Everything here is
//! dense, deterministic `f64` arithmetic: ambient dimensions are expected in
//! the tens-to-hundreds range, not the thousands.

pub mod complements;
pub mod completion;
pub mod io;
pub mod model;
pub mod numerics;
pub mod reconstruct;
pub mod testing;
pub mod tetris;

pub use model::{FusionFrame, SpectrumSpec, Subspace, VerificationReport, WeightedSubspace};
pub use numerics::Matrix;

/// Default tolerance for spectral comparisons and classification flags
/// (tightness, Parsevality, frame bound positivity).
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-8;

/// Default tolerance for orthonormality residuals of subspace bases.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-10;

/// Residuals within this distance of an integer are snapped to it during
/// spectrum bookkeeping (eigenvalue sum factorization, singleton emission).
pub const INTEGER_SNAP_TOL: f64 = 1e-9;
