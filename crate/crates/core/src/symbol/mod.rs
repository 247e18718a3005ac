//! Symbol-level analysis of the first-order system equivalent to the
//! weighted MGT operator `M_β u = e^{-βt} f`, `u = e^{-βt} w`, together with
//! numerical probes of the resolvent and semigroup estimates.

mod estimate;
mod lopatinskii;
mod weighted;

pub use estimate::{estimate_probe, EstimateKind, ProbeReport};
pub use lopatinskii::{
    finite_eigenvalues, lopatinskii_floor, lopatinskii_sweep, stable_subspace, FrequencyPoint,
    SweepResult, SweepRow, SystemSymbol,
};
pub use weighted::{weighted_norm, SpaceTimeGrid};
