//! The exponential-transform reduction of the MGT problem to per-mode
//! Volterra equations.
//!
//! With `v = e^{γt/2} w`, `γ = α - c²/b`, each mode of `v` solves
//! `v + ℓ ∗ v = H`, where the kernel `ℓ` collects the zeroth-order term
//! `β v` and the memory term `K ∗ v` propagated by the sine family of speed
//! `√b`, and `H` is the response of the wave equation with transformed data.
//! Differentiating gives Volterra equations with the same kernel for `v_t`
//! and `v_tt`; `(w, w_t, w_tt)` follow by product-rule algebra.

mod affine;
mod bundle;
mod data;
mod decomposition;
mod kernel;
mod params;
mod solve;

pub use affine::{build_affine, build_affine_raw, forcing_transform, AffineTerms, ForcingTransform};
pub use bundle::{Component, SolutionBundle};
pub use data::{Compatibility, Forcing, ForcingTerm, MgtData, COMPATIBILITY_TOL};
pub use decomposition::{trace_decomposition, DecompositionTraces, TraceDecomposition};
pub use kernel::{build_kernel, ModeKernel};
pub use params::{derive_constants, DerivedConstants, MgtParams};
pub use solve::{solve_mgt, SolveMethod, SolveOptions};
