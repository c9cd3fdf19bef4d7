//! Physical constants (CODATA 2018), SI units.
//!
//! All numerical results of this crate are tied to one constants table so
//! that regression values stay reproducible bit for bit.

/// Reduced Planck constant, J s.
pub const H_BAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact since the 2019 SI redefinition).
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 2.997_924_58e8;

/// Vacuum permeability, N/A².
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Bohr magneton, J/T. Default magnitude of the magnetic transition
/// dipole moment when a configuration does not specify one.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

/// Identifier of the constants table, recorded in CSV metadata.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::assertions_on_constants)]
    fn constants_have_expected_magnitudes() {
        assert!(H_BAR > 1.0e-34 && H_BAR < 1.1e-34);
        assert!(K_B > 1.3e-23 && K_B < 1.4e-23);
        assert_eq!(C, 299_792_458.0);
        assert!((MU_0 - 4.0e-7 * std::f64::consts::PI).abs() / MU_0 < 1e-9);
    }
}
