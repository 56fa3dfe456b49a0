use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;
use crate::series::TruncSeries;

/// The pair `(φ, ψ)` of a noncovariant realization with its derived series.
///
/// `γ = (φ'/φ)ψ + 1` has one order less than `φ` because of the derivative;
/// `Ψ = ∫ dt/ψ` keeps the order of `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoncovParams {
    phi: TruncSeries,
    psi: TruncSeries,
    gamma: TruncSeries,
    big_psi: TruncSeries,
}

impl NoncovParams {
    pub fn new(phi: TruncSeries, psi: TruncSeries) -> Result<Self> {
        let one = GaussScalar::one();
        if phi.coeff(0) != &one {
            return Err(Error::Realization(format!("phi(0) must be 1, got {}", phi.coeff(0))));
        }
        if psi.coeff(0) != &one {
            return Err(Error::Realization(format!("psi(0) must be 1, got {}", psi.coeff(0))));
        }
        let order = phi.order().min(psi.order());
        if order < 1 {
            return Err(Error::Realization("phi and psi need order at least 1".into()));
        }
        let phi = phi.truncate(order);
        let psi = psi.truncate(order);
        let dphi = phi.derivative();
        let ratio = &dphi * &phi.truncate(order - 1).recip()?;
        let gamma = &(&ratio * &psi.truncate(order - 1)) + &TruncSeries::one(order - 1);
        let big_psi = psi.recip()?.integrate();
        Ok(Self { phi, psi, gamma, big_psi })
    }

    /// Bicrossproduct basis `φ = ψ = 1`.
    pub fn trivial(order: usize) -> Self {
        Self::new(TruncSeries::one(order), TruncSeries::one(order)).expect("valid")
    }

    pub fn order(&self) -> usize {
        self.phi.order()
    }

    pub fn phi(&self) -> &TruncSeries {
        &self.phi
    }

    pub fn psi(&self) -> &TruncSeries {
        &self.psi
    }

    pub fn gamma(&self) -> &TruncSeries {
        &self.gamma
    }

    /// `Ψ(t) = ∫_0^t ds/ψ(s)`.
    pub fn big_psi(&self) -> &TruncSeries {
        &self.big_psi
    }

    /// Series of `Z^k = e^{kΨ}`.
    pub fn z_pow(&self, k: i64) -> TruncSeries {
        self.big_psi.scale(&GaussScalar::from_int(k)).exp().expect("Ψ(0) = 0")
    }

    /// Compositional inverse `Ψ⁻¹`.
    pub fn big_psi_inverse(&self) -> TruncSeries {
        self.big_psi.comp_inverse().expect("Ψ'(0) = 1")
    }

    /// `γ` is identically constant.
    pub fn gamma_is_constant(&self) -> bool {
        self.gamma.coeffs().iter().skip(1).all(Zero::is_zero)
    }
}
