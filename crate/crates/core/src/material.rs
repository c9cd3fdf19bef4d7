//! Dielectric response of the metal half-space.
//!
//! Two local, isotropic, nonmagnetic models: a Drude metal with Ohmic
//! dissipation rate γ (taken independent of temperature) and its
//! dissipationless γ = 0 limit, the plasma model. The model set is a closed
//! enum because the static-field behaviour downstream is model-specific and
//! must be handled exhaustively.
//!
//! The static point ω = 0 is excluded from both evaluation routines: ε itself
//! diverges there while the physical observables stay finite, so the static
//! limit is taken analytically in the Green-tensor module instead.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("plasma frequency must be positive, got {0:e} rad/s")]
    InvalidPlasmaFrequency(f64),
    #[error("dissipation rate must be finite and non-negative, got {0:e} rad/s")]
    InvalidDissipationRate(f64),
    #[error("frequency must be positive, got {0:e} rad/s")]
    NonPositiveFrequency(f64),
}

/// Local dielectric function of the surface: Drude or plasma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DielectricModel {
    /// ε(ω) = 1 − ωₚ²/[ω(ω + iγ)]
    Drude { omega_p: f64, gamma: f64 },
    /// ε(ω) = 1 − ωₚ²/ω², the γ = 0 limit of Drude. Shields static
    /// magnetic fields (superconductor-like response).
    Plasma { omega_p: f64 },
}

impl DielectricModel {
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self, MaterialError> {
        if omega_p <= 0.0 || !omega_p.is_finite() {
            return Err(MaterialError::InvalidPlasmaFrequency(omega_p));
        }
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(MaterialError::InvalidDissipationRate(gamma));
        }
        Ok(Self::Drude { omega_p, gamma })
    }

    pub fn plasma(omega_p: f64) -> Result<Self, MaterialError> {
        if omega_p <= 0.0 || !omega_p.is_finite() {
            return Err(MaterialError::InvalidPlasmaFrequency(omega_p));
        }
        Ok(Self::Plasma { omega_p })
    }

    pub fn omega_p(&self) -> f64 {
        match *self {
            Self::Drude { omega_p, .. } | Self::Plasma { omega_p } => omega_p,
        }
    }

    /// Dissipation rate; exactly zero for the plasma model.
    pub fn gamma(&self) -> f64 {
        match *self {
            Self::Drude { gamma, .. } => gamma,
            Self::Plasma { .. } => 0.0,
        }
    }

    /// Whether the surface expels static magnetic fields. True for the
    /// plasma model and for a Drude metal with γ = 0 (the same response);
    /// false for any dissipative Drude metal.
    pub fn shields_static_field(&self) -> bool {
        self.gamma() == 0.0
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Drude { .. } => "drude",
            Self::Plasma { .. } => "plasma",
        }
    }

    /// ε(iξ) on the imaginary frequency axis, ξ > 0.
    ///
    /// Drude: 1 + ωₚ²/[ξ(ξ + γ)]; plasma: 1 + ωₚ²/ξ². Real, > 1, and
    /// strictly decreasing in ξ for both models.
    pub fn permittivity_imag(&self, xi: f64) -> Result<f64, MaterialError> {
        if xi.is_nan() || xi <= 0.0 {
            return Err(MaterialError::NonPositiveFrequency(xi));
        }
        let omega_p = self.omega_p();
        Ok(1.0 + omega_p * omega_p / (xi * (xi + self.gamma())))
    }

    /// ε(ω) on the real frequency axis, ω > 0.
    ///
    /// Passive for γ > 0 (Im ε > 0); purely real for the plasma model.
    pub fn permittivity_real(&self, omega: f64) -> Result<Complex64, MaterialError> {
        if omega.is_nan() || omega <= 0.0 {
            return Err(MaterialError::NonPositiveFrequency(omega));
        }
        let omega_p = self.omega_p();
        let gamma = self.gamma();
        if gamma == 0.0 {
            Ok(Complex64::new(1.0 - (omega_p / omega).powi(2), 0.0))
        } else {
            let denom = Complex64::new(omega * omega, omega * gamma);
            Ok(Complex64::new(1.0, 0.0) - omega_p * omega_p / denom)
        }
    }
}
