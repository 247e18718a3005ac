use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coefficients of `w_ttt + α w_tt - c² Δw - b Δw_t = f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MgtParams {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
}

impl MgtParams {
    pub fn new(alpha: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self { alpha, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("b", self.b), ("c", self.c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn derived(&self) -> Result<DerivedConstants> {
        derive_constants(self)
    }
}

/// Constants of the reduction, always recomputed from [`MgtParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `κ = c²/b`.
    pub kappa: f64,
    /// `γ = α - c²/b`.
    pub gamma: f64,
    /// `β = -γ(3γ/4 - α)`.
    pub volterra_beta: f64,
    /// `r = 3γ/2 - α`.
    pub decay: f64,
    /// `K(t) = k0 e^{rt}` with `k0 = -γ(γ-α)²`.
    pub k0: f64,
    pub tau: f64,
}

pub fn derive_constants(p: &MgtParams) -> Result<DerivedConstants> {
    p.validate()?;
    let kappa = p.c * p.c / p.b;
    let gamma = p.alpha - kappa;
    Ok(DerivedConstants {
        kappa,
        gamma,
        volterra_beta: -gamma * (0.75 * gamma - p.alpha),
        decay: 1.5 * gamma - p.alpha,
        k0: -gamma * (gamma - p.alpha).powi(2),
        tau: 1.0,
    })
}

impl DerivedConstants {
    fn exp(&self, t: f64) -> f64 {
        (self.decay * t).exp()
    }

    pub fn k(&self, t: f64) -> f64 {
        self.k0 * self.exp(t)
    }

    /// Weight of `w0` in the transformed source: `γ(γ-α) e^{rt}`.
    pub fn h0(&self, t: f64) -> f64 {
        -self.gamma * self.kappa * self.exp(t)
    }

    /// Weight of `w1` in the transformed source: `γ e^{rt}`.
    pub fn h1(&self, t: f64) -> f64 {
        self.gamma * self.exp(t)
    }

    /// Weight of `w2 - bΔw0` in the transformed source: `e^{rt}`.
    pub fn h2(&self, t: f64) -> f64 {
        self.exp(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_constants() {
        let d = derive_constants(&MgtParams::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(d.gamma, 1.0);
        assert_relative_eq!(d.volterra_beta, 1.25);
        assert_relative_eq!(d.decay, -0.5);
        for t in [0.0, 0.4, 1.0] {
            assert_relative_eq!(d.k(t), -(-0.5 * t).exp(), epsilon = 1e-15);
        }
    }

    #[test]
    fn threshold_kills_memory() {
        let d = derive_constants(&MgtParams::new(2.0, 0.5, 1.0).unwrap()).unwrap();
        assert_eq!(d.gamma, 0.0);
        assert_eq!(d.volterra_beta, 0.0);
        assert_eq!(d.k0, 0.0);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(MgtParams::new(0.0, 1.0, 1.0).is_err());
        assert!(MgtParams::new(1.0, -1.0, 1.0).is_err());
        assert!(MgtParams::new(1.0, 1.0, f64::NAN).is_err());
    }
}
