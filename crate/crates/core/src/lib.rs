//! Magnetic-dipole Casimir-Polder interaction between an atom and a planar
//! metal surface.
//!
//! The crate evaluates the free energy of the magnetic dipole coupling for
//! thermal, ground-state and excited-state atoms above a Drude or plasma
//! half-space: Fresnel reflection amplitudes on the imaginary and real
//! frequency axes, the diagonal magnetic Green tensor by adaptive
//! quadrature, state-specific polarizabilities, and Matsubara summation
//! with controlled truncation. Magnetic transition frequencies are small
//! compared to optical scales, which makes the interaction repulsive for
//! thermal atoms, strongly temperature-dependent, and sensitive to Ohmic
//! dissipation in the surface: a dissipative metal decouples thermally at
//! distances beyond ħc/4πk_BT, a plasma does not.

pub mod atom;
pub mod constants;
pub mod energy;
pub mod fresnel;
pub mod green;
pub mod material;
pub mod quad;

pub use atom::{photon_number, polarizability_imag, LevelScheme, TwoLevelAtom};
pub use energy::{
    equilibrium_matsubara_tail, equilibrium_matsubara_tail_opts, equilibrium_zeroth_term,
    free_energy_equilibrium, free_energy_equilibrium_opts, free_energy_ground_2level,
    free_energy_ground_2level_opts, free_energy_state, free_energy_state_opts,
    free_energy_zero_temperature, matsubara_frequency, thermal_wavelength, EnergyError,
    FreeEnergyResult, SeriesOptions,
};
pub use green::{green_imag, green_imag_mirror, green_real, green_static, GreenDiag, GreenError};
pub use material::{DielectricModel, MaterialError};
