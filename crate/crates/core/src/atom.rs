//! Atomic magnetic-dipole data, state-specific polarizability, and thermal
//! photon numbers.
//!
//! The state-specific magnetic polarizability for an atom in state a is
//!
//!   β_ij^a(ω) = Σ_b (μ_i^{ab} μ_j^{ba}/ħ) · 2ω_ba/(ω_ba² − (ω + i0⁺)²),
//!
//! evaluated here on the imaginary axis, where it is real. Signed transition
//! frequencies carry the state dependence: a ground-state scheme has all
//! ω_ba > 0, an excited two-level scheme has ω_ba < 0 and flips the sign of
//! the whole tensor.
//!
//! The two-level atom is fixed in the geometry of a static dipole
//! perpendicular to the surface: the transition moments lie in the surface
//! plane, so β_xx = β_yy and β_zz = 0.

use thiserror::Error;

use crate::constants::{BOHR_MAGNETON, H_BAR, K_B};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomError {
    #[error("transition frequency must be positive, got {0:e} rad/s")]
    InvalidTransitionFrequency(f64),
    #[error("dipole moment must be positive and finite, got {0:e} J/T")]
    InvalidDipoleMoment(f64),
    #[error("level scheme needs at least one transition with finite data")]
    EmptyScheme,
    #[error("transition data must be finite and ω_ba ≠ 0")]
    InvalidTransition,
    #[error("photon number undefined at ω = 0")]
    ZeroFrequency,
    #[error("temperature must be positive, got {0:e} K")]
    NonPositiveTemperature(f64),
}

/// Two-level atom with magnetic transition frequency Ω_m and in-plane
/// transition dipole moment of magnitude μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    omega_m: f64,
    mu: f64,
}

impl TwoLevelAtom {
    pub fn new(omega_m: f64, mu: f64) -> Result<Self, AtomError> {
        if omega_m <= 0.0 || !omega_m.is_finite() {
            return Err(AtomError::InvalidTransitionFrequency(omega_m));
        }
        if mu <= 0.0 || !mu.is_finite() {
            return Err(AtomError::InvalidDipoleMoment(mu));
        }
        Ok(Self { omega_m, mu })
    }

    /// Transition moment of one Bohr magneton.
    pub fn with_bohr_magneton(omega_m: f64) -> Result<Self, AtomError> {
        Self::new(omega_m, BOHR_MAGNETON)
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Ground-state scheme: two degenerate transitions at +Ω_m with moments
    /// along x̂ and ŷ, giving β_xx = β_yy = (μ²/ħ)·2Ω_m/(Ω_m² + ξ²), β_zz = 0.
    pub fn ground_scheme(&self) -> LevelScheme {
        LevelScheme {
            transitions: vec![
                Transition {
                    omega_ba: self.omega_m,
                    moment: [self.mu, 0.0, 0.0],
                },
                Transition {
                    omega_ba: self.omega_m,
                    moment: [0.0, self.mu, 0.0],
                },
            ],
        }
    }

    /// Excited-state scheme: the same transitions seen from the upper level,
    /// ω_ba = −Ω_m, so the polarizability is exactly −β^g.
    pub fn excited_scheme(&self) -> LevelScheme {
        LevelScheme {
            transitions: vec![
                Transition {
                    omega_ba: -self.omega_m,
                    moment: [self.mu, 0.0, 0.0],
                },
                Transition {
                    omega_ba: -self.omega_m,
                    moment: [0.0, self.mu, 0.0],
                },
            ],
        }
    }

    /// Scalar ground-state β_xx(iξ) = (μ²/ħ)·2Ω_m/(Ω_m² + ξ²).
    pub fn polarizability_ground_xx(&self, xi: f64) -> f64 {
        assert!(xi >= 0.0, "imaginary frequency must be non-negative");
        (self.mu * self.mu / H_BAR) * 2.0 * self.omega_m / (self.omega_m * self.omega_m + xi * xi)
    }

    /// Thermal-average factor tanh(ħΩ_m/2k_BT); returns exactly 1 at T = 0.
    pub fn thermal_factor(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "temperature must be non-negative");
        if t == 0.0 {
            1.0
        } else {
            (H_BAR * self.omega_m / (2.0 * K_B * t)).tanh()
        }
    }

    /// Thermal-state polarizability tensor: tanh(ħΩ_m/2k_BT)·β^g(iξ).
    pub fn polarizability_thermal(&self, t: f64, xi: f64) -> PolarizabilityTensor {
        let mut tensor = polarizability_imag(&self.ground_scheme(), xi);
        let factor = self.thermal_factor(t);
        for row in tensor.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        tensor
    }
}

/// One transition a → b: signed frequency ω_ba and real transition moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Signed transition frequency (E_b − E_a)/ħ, rad/s. Negative for
    /// downward transitions (excited initial state).
    pub omega_ba: f64,
    /// Transition dipole moment vector, J/T.
    pub moment: [f64; 3],
}

impl Transition {
    /// In-plane moment weight μ_x² + μ_y².
    pub fn planar_weight(&self) -> f64 {
        self.moment[0] * self.moment[0] + self.moment[1] * self.moment[1]
    }

    /// Axial moment weight μ_z².
    pub fn axial_weight(&self) -> f64 {
        self.moment[2] * self.moment[2]
    }
}

/// Set of transitions out of one atomic state.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelScheme {
    transitions: Vec<Transition>,
}

impl LevelScheme {
    pub fn new(transitions: Vec<Transition>) -> Result<Self, AtomError> {
        if transitions.is_empty() {
            return Err(AtomError::EmptyScheme);
        }
        for t in &transitions {
            if !t.omega_ba.is_finite()
                || t.omega_ba == 0.0
                || t.moment.iter().any(|m| !m.is_finite())
            {
                return Err(AtomError::InvalidTransition);
            }
        }
        Ok(Self { transitions })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Smallest |ω_ba| in the scheme; sets the frequency scale on which the
    /// polarizability varies.
    pub fn min_abs_omega(&self) -> f64 {
        self.transitions
            .iter()
            .map(|t| t.omega_ba.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Real symmetric 3×3 polarizability tensor, J/T².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityTensor {
    m: [[f64; 3]; 3],
}

impl PolarizabilityTensor {
    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn xx(&self) -> f64 {
        self.m[0][0]
    }

    pub fn yy(&self) -> f64 {
        self.m[1][1]
    }

    pub fn zz(&self) -> f64 {
        self.m[2][2]
    }

    /// β_xx + β_yy, the weight multiplying H_xx = H_yy.
    pub fn planar_sum(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }
}

/// Polarizability tensor on the imaginary axis,
/// β_ij(iξ) = Σ_b μ_i μ_j (2ω_ba/ħ)/(ω_ba² + ξ²), ξ ≥ 0.
pub fn polarizability_imag(scheme: &LevelScheme, xi: f64) -> PolarizabilityTensor {
    assert!(xi >= 0.0, "imaginary frequency must be non-negative");
    let mut m = [[0.0f64; 3]; 3];
    for t in &scheme.transitions {
        let lorentz = 2.0 * t.omega_ba / (H_BAR * (t.omega_ba * t.omega_ba + xi * xi));
        for (row, mi) in m.iter_mut().zip(t.moment) {
            for (v, mj) in row.iter_mut().zip(t.moment) {
                *v += mi * mj * lorentz;
            }
        }
    }
    PolarizabilityTensor { m }
}

/// Mean thermal photon number n(ω) = 1/(e^{ħω/k_BT} − 1), ω ≠ 0, T > 0.
///
/// For ω < 0 the same expression yields n(ω) = −(1 + n(|ω|)), the signed
/// occupation that drives the excited-state sign flip. The expm1 form stays
/// accurate for |ħω| ≪ k_BT.
pub fn photon_number(omega: f64, t: f64) -> Result<f64, AtomError> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(AtomError::ZeroFrequency);
    }
    if t <= 0.0 || !t.is_finite() {
        return Err(AtomError::NonPositiveTemperature(t));
    }
    Ok(1.0 / (H_BAR * omega / (K_B * t)).exp_m1())
}
