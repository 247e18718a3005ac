//! Model domains, the closed-form Dirichlet eigenbasis, spectral fields,
//! the Dirichlet (harmonic extension) map, Sobolev norms and normal traces.
//!
//! Conventions: `A e_k = -μ_k e_k` with `A` the Dirichlet Laplacian, and
//! eigenfunctions are `L²`-orthonormal. Boundary data are constant per
//! boundary node: the two endpoints of the interval, or the four edges of the
//! square (ordered bottom, right, top, left).

mod basis;
mod field;
mod lifting;
mod norm;
mod signal;
mod trace;

pub use basis::{build_basis, DomainKind, DomainSpec, EigenBasis, Mode};
pub use field::{BoundaryValues, GridFunction, LiftedField, SpectralField};
pub use lifting::{dirichlet_map, DirichletLift, Lifting};
pub use norm::{grid_sobolev_norm, sobolev_norm, spectral_sobolev_norm, NormMethod};
pub use signal::{BoundarySignal, DerivativeSource, NodeSignal, Regularity, TimeProfile};
pub use trace::{normal_trace, normal_trace_at, normal_trace_series, TRACE_CAUCHY_TOL};
