use num_complex::Complex64;

use super::params::{derive_constants, MgtParams};
use crate::spectral::EigenBasis;
use crate::volterra::ScalarKernel;
use crate::Result;

/// Kernel of one mode and its time derivative.
#[derive(Debug, Clone)]
pub struct ModeKernel {
    /// `ω = √(b μ)`.
    pub omega: f64,
    pub ell: ScalarKernel,
    pub ell_t: ScalarKernel,
}

/// `ℓ(t) = -β sin(ωt)/ω - (1/ω) ∫₀ᵗ sin(ω(t-s)) K(s) ds` per mode.
///
/// With `K(s) = k0 e^{rs}` and `D = r² + ω²` the integral is
/// `k0 (ω e^{rt} - ω cos ωt - r sin ωt)/D`, so `ℓ` is the exponential sum
/// `-k0/D e^{rt} + k0/D cos ωt + (k0 r/(ωD) - β/ω) sin ωt`.
pub fn build_kernel(p: &MgtParams, basis: &EigenBasis) -> Result<Vec<ModeKernel>> {
    let d = derive_constants(p)?;
    Ok(basis
        .eigenvalues()
        .iter()
        .map(|mu| {
            let omega = (p.b * mu).sqrt();
            if d.volterra_beta == 0.0 && d.k0 == 0.0 {
                return ModeKernel { omega, ell: ScalarKernel::zero(), ell_t: ScalarKernel::zero() };
            }
            let den = d.decay * d.decay + omega * omega;
            let a_exp = -d.k0 / den;
            let a_cos = d.k0 / den;
            let a_sin = d.k0 * d.decay / (omega * den) - d.volterra_beta / omega;
            // a cos + b sin = Re[(a - ib) e^{iωt}]
            let ell = ScalarKernel::exp_sum(vec![
                (Complex64::new(a_exp, 0.0), Complex64::new(d.decay, 0.0)),
                (Complex64::new(a_cos, -a_sin), Complex64::new(0.0, omega)),
            ]);
            let ell_t = ell.derivative().expect("exponential sums differentiate");
            ModeKernel { omega, ell, ell_t }
        })
        .collect())
}
