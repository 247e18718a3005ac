//! Cosine/sine operator families of the Dirichlet Laplacian, realized
//! diagonally in the eigenbasis, together with the time-convolution
//! primitives they need.
//!
//! For a family of speed `s`, mode `k` has frequency `ω_k = s√μ_k`; the
//! real primitives are `C_k(t) = cos(ω_k t)` and `S_k(t) = sin(ω_k t)/√μ_k`.

mod cosine;
mod grid;
mod quad;
mod wave;

pub use cosine::{cosine_apply, CosineFamily, CosineVariant};
pub use grid::{QuadratureRule, TimeGrid, Trajectory};
pub use quad::{cos_conv, exp_conv, exp_conv_complex, sin_conv, step_weights};
pub(crate) use wave::lift_mode;
pub use wave::{
    boundary_convolution_probe, kop_apply, lifting_normal_series, trajectory_normal_traces,
    wave_solve, wave_solve_raw, BoundaryProbe, WaveSolution,
};
