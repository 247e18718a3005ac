//! Numerical laboratory for the Cauchy-Dirichlet problem of the
//! Moore-Gibson-Thompson (MGT) equation
//!
//! ```text
//! w_ttt + α w_tt - c² Δw - b Δw_t = f   in (0,T) × Ω
//! w = g                               on (0,T) × Γ
//! ```
//!
//! Two independent solution routes are implemented and cross-checked:
//!
//! * [`reduction`]: the exponential transform `v = e^{γt/2} w` turns the
//!   problem into a Volterra equation of the second kind whose kernel and
//!   affine term are built from cosine/sine families of the Dirichlet
//!   Laplacian ([`families`]) and solved by [`volterra`].
//! * [`oracle`]: direct per-mode integration of the projected third-order ODE.
//!
//! [`symbol`] covers the first-order hyperbolic system view (stable subspace,
//! uniform Lopatinskii check, estimate probes), and [`harness`] drives
//! experiments and writes CSV/JSON reports.
//!
//! Everything is diagonal in the Dirichlet eigenbasis, so per-mode work is
//! distributed with rayon when the `parallel` feature is enabled (see [`par`]).

// `!(x > 0.0)` is used on purpose so that NaN fails positivity checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod harness;
pub mod oracle;
pub mod par;
pub mod reduction;
pub mod spectral;
pub mod symbol;
pub mod volterra;

pub use error::{Error, Result};
pub use par::Execution;
