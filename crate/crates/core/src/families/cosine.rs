use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::spectral::{EigenBasis, SpectralField};
use crate::{Error, Result};

/// `R_±(s t)` with `𝒜 = i(-A)^{1/2}`, acting diagonally on the eigenbasis.
#[derive(Debug, Clone)]
pub struct CosineFamily {
    basis: Arc<EigenBasis>,
    speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosineVariant {
    /// `R_+(t)`: `cos(ω_k t)`.
    Rplus,
    /// `𝒜⁻¹R_-(t)`: `sin(ω_k t)/√μ_k`.
    AinvRminus,
    /// `𝒜R_-(t)`: `-√μ_k sin(ω_k t)`.
    ARminus,
    /// `𝒜²R_+(t)`: `-μ_k cos(ω_k t)`.
    A2Rplus,
}

impl CosineFamily {
    pub fn new(basis: Arc<EigenBasis>, speed: f64) -> Result<Self> {
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::invalid(format!("family speed must be positive, got {speed}")));
        }
        Ok(Self { basis, speed })
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// `ω_k = s √μ_k`.
    pub fn omega(&self, k: usize) -> f64 {
        self.speed * self.basis.eigenvalue(k).sqrt()
    }

    /// `C_k(t)`.
    pub fn c(&self, k: usize, t: f64) -> f64 {
        (self.omega(k) * t).cos()
    }

    /// `S_k(t) = sin(ω_k t)/√μ_k`.
    pub fn s(&self, k: usize, t: f64) -> f64 {
        (self.omega(k) * t).sin() / self.basis.eigenvalue(k).sqrt()
    }

    pub fn symbol(&self, variant: CosineVariant, k: usize, t: f64) -> f64 {
        let mu = self.basis.eigenvalue(k);
        match variant {
            CosineVariant::Rplus => self.c(k, t),
            CosineVariant::AinvRminus => self.s(k, t),
            CosineVariant::ARminus => -mu * self.s(k, t),
            CosineVariant::A2Rplus => -mu * self.c(k, t),
        }
    }
}

pub fn cosine_apply(
    fam: &CosineFamily,
    t: f64,
    x: &SpectralField,
    variant: CosineVariant,
) -> Result<SpectralField> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    if !fam.basis.same_as(x.basis()) {
        return Err(Error::BasisMismatch("field and family use different bases".into()));
    }
    let coeffs = x
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| fam.symbol(variant, k, t) * c)
        .collect();
    SpectralField::new(fam.basis.clone(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, DomainSpec};
    use approx::assert_relative_eq;

    fn family(n: usize) -> CosineFamily {
        CosineFamily::new(build_basis(DomainSpec::interval(32).unwrap(), n).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn identities_at_zero() {
        let fam = family(5);
        let x = SpectralField::new(fam.basis().clone(), vec![1.0, -2.0, 0.5, 3.0, 0.1]).unwrap();
        assert_eq!(cosine_apply(&fam, 0.0, &x, CosineVariant::Rplus).unwrap().coeffs(), x.coeffs());
        assert!(cosine_apply(&fam, 0.0, &x, CosineVariant::AinvRminus)
            .unwrap()
            .coeffs()
            .iter()
            .all(|c| *c == 0.0));
    }

    #[test]
    fn first_mode_at_unit_time() {
        let fam = family(3);
        let e1 = SpectralField::unit(fam.basis().clone(), 0);
        let out = cosine_apply(&fam, 1.0, &e1, CosineVariant::Rplus).unwrap();
        assert_relative_eq!(out.coeffs()[0], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn variant_relations() {
        let fam = family(4);
        let t = 0.37;
        for k in 0..4 {
            let mu = fam.basis().eigenvalue(k);
            assert_relative_eq!(
                fam.symbol(CosineVariant::ARminus, k, t),
                -mu * fam.symbol(CosineVariant::AinvRminus, k, t),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                fam.symbol(CosineVariant::A2Rplus, k, t),
                -mu * fam.symbol(CosineVariant::Rplus, k, t),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejects_other_basis() {
        let fam = family(3);
        let other = build_basis(DomainSpec::interval(32).unwrap(), 4).unwrap();
        let x = SpectralField::zeros(other);
        assert!(cosine_apply(&fam, 0.1, &x, CosineVariant::Rplus).is_err());
        assert!(CosineFamily::new(fam.basis().clone(), 0.0).is_err());
    }
}
