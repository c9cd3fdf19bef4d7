//! Fresnel reflection amplitudes of the planar vacuum-metal interface.
//!
//! Conventions: the normal wavevector in vacuum is
//! κ = [k² − (ω + i0⁺)²/c²]^{1/2}. On the imaginary axis (ω = iξ) it is real
//! and ≥ ξ/c; on the real axis the outgoing-wave branch is taken: Re κ ≥ 0,
//! and Im κ ≤ 0 when Re κ = 0, so that e^{−2κL} either decays or carries the
//! outgoing phase e^{2iqL}. The same branch rule applies to the medium-side
//! κ₂ = [k² − ε(ω)ω²/c²]^{1/2} (decay into the half-space).
//!
//! r_s = (κ₁ − κ₂)/(κ₁ + κ₂),  r_p = (ε κ₁ − κ₂)/(ε κ₁ + κ₂).

use num_complex::Complex64;

use crate::constants::C;
use crate::material::{DielectricModel, MaterialError};

/// Evaluation frequency: ω = iξ (imaginary axis, ξ > 0) or ω real > 0
/// understood as ω + i0⁺.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Imaginary(f64),
    Real(f64),
}

/// Normal wavevector component, 1/m. Re ≥ 0 always; Im ≤ 0 whenever Re = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa(pub Complex64);

impl Kappa {
    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Square root on the decaying/outgoing branch: Re ≥ 0, and Im ≤ 0 when the
/// result is purely imaginary (argument on the negative real axis).
pub(crate) fn decaying_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re == 0.0 && r.im > 0.0 {
        -r
    } else {
        r
    }
}

/// Vacuum normal wavevector κ = [k² − (ω + i0⁺)²/c²]^{1/2}, k ≥ 0.
///
/// On the real axis the light cone k = ω/c separates the evanescent sector
/// (κ real ≥ 0) from the propagating one (κ = −iq). Both sides are computed
/// from the factored difference of squares so nodes arbitrarily close to the
/// cone do not suffer cancellation.
pub fn kappa_vacuum(k: f64, freq: Frequency) -> Kappa {
    debug_assert!(k >= 0.0, "in-plane wavevector must be non-negative");
    match freq {
        Frequency::Imaginary(xi) => {
            let koc = xi / C;
            Kappa(Complex64::new((k * k + koc * koc).sqrt(), 0.0))
        }
        Frequency::Real(omega) => {
            let koc = omega / C;
            if k >= koc {
                Kappa(Complex64::new(((k - koc) * (k + koc)).sqrt(), 0.0))
            } else {
                Kappa(Complex64::new(0.0, -((koc - k) * (koc + k)).sqrt()))
            }
        }
    }
}

/// Medium-side normal wavevector κ₂ = [k² − ε ω²/c²]^{1/2} on the decaying
/// branch.
pub fn kappa_medium(k: f64, freq: Frequency, eps: Complex64) -> Kappa {
    match freq {
        Frequency::Imaginary(xi) => {
            let koc2 = (xi / C) * (xi / C);
            Kappa(decaying_sqrt(Complex64::new(k * k, 0.0) + eps * koc2))
        }
        Frequency::Real(omega) => {
            let koc2 = (omega / C) * (omega / C);
            Kappa(decaying_sqrt(Complex64::new(k * k, 0.0) - eps * koc2))
        }
    }
}

/// s-polarization amplitude from precomputed normal wavevectors. Invariant
/// under a common rescaling of both κ's, so scaled (dimensionless) values may
/// be passed.
pub fn r_s_from_kappas(kappa1: Complex64, kappa2: Complex64) -> Complex64 {
    (kappa1 - kappa2) / (kappa1 + kappa2)
}

/// p-polarization amplitude from precomputed normal wavevectors.
pub fn r_p_from_kappas(eps: Complex64, kappa1: Complex64, kappa2: Complex64) -> Complex64 {
    (eps * kappa1 - kappa2) / (eps * kappa1 + kappa2)
}

fn permittivity(model: &DielectricModel, freq: Frequency) -> Result<Complex64, MaterialError> {
    match freq {
        Frequency::Imaginary(xi) => Ok(Complex64::new(model.permittivity_imag(xi)?, 0.0)),
        Frequency::Real(omega) => model.permittivity_real(omega),
    }
}

/// Fresnel amplitude for s polarization at in-plane wavevector k.
///
/// On the imaginary axis the result is real and lies in (−1, 0].
pub fn r_s(k: f64, freq: Frequency, model: &DielectricModel) -> Result<Complex64, MaterialError> {
    let eps = permittivity(model, freq)?;
    Ok(r_s_from_kappas(
        kappa_vacuum(k, freq).0,
        kappa_medium(k, freq, eps).0,
    ))
}

/// Fresnel amplitude for p polarization at in-plane wavevector k.
///
/// On the imaginary axis the result is real and lies in [0, 1), approaching
/// (ε − 1)/(ε + 1) as k → ∞.
pub fn r_p(k: f64, freq: Frequency, model: &DielectricModel) -> Result<Complex64, MaterialError> {
    let eps = permittivity(model, freq)?;
    Ok(r_p_from_kappas(
        eps,
        kappa_vacuum(k, freq).0,
        kappa_medium(k, freq, eps).0,
    ))
}

/// Both amplitudes on the imaginary axis in scaled variables, all-real fast
/// path for the Green-tensor integrands.
///
/// `u` = κ₁L, `eps` = ε(iξ), and `c2` = (ε − 1)(ξL/c)², so that
/// κ₂L = √(u² + c2). r_s is evaluated as −c2/(u + κ₂L)², the algebraically
/// cancelled form of (u − κ₂L)/(u + κ₂L), which stays exact when c2 ≪ u²
/// and the direct difference would round to zero.
pub(crate) fn rs_rp_imag_scaled(u: f64, c2: f64, eps: f64) -> (f64, f64) {
    let s2 = (u * u + c2).sqrt();
    let den = u + s2;
    (-c2 / (den * den), (eps * u - s2) / (eps * u + s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const WP: f64 = 8.9e15;
    const GAMMA: f64 = 8.9e13;

    #[test]
    fn kappa_vacuum_trivial_points() {
        // k = 0, imaginary axis: κ = ξ/c
        let xi = 1.0e14;
        let k0 = kappa_vacuum(0.0, Frequency::Imaginary(xi)).value();
        assert_relative_eq!(k0.re, xi / C, max_relative = 1e-15);
        assert_eq!(k0.im, 0.0);

        // k = 0, real axis: κ = −iω/c (propagating branch)
        let omega = 1.0e15;
        let kr = kappa_vacuum(0.0, Frequency::Real(omega)).value();
        assert_eq!(kr.re, 0.0);
        assert_relative_eq!(kr.im, -omega / C, max_relative = 1e-15);

        // light cone: κ = 0
        let kc = kappa_vacuum(omega / C, Frequency::Real(omega)).value();
        assert_eq!(kc, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn kappa_is_continuous_across_the_light_cone() {
        let omega = 1.0e15;
        let koc = omega / C;
        for rel in [1e-6, 1e-9, 1e-12] {
            let below = kappa_vacuum(koc * (1.0 - rel), Frequency::Real(omega)).value();
            let above = kappa_vacuum(koc * (1.0 + rel), Frequency::Real(omega)).value();
            assert!(below.norm() < koc * (3.0 * rel).sqrt());
            assert!(above.norm() < koc * (3.0 * rel).sqrt());
        }
    }

    #[test]
    fn vacuum_surface_does_not_reflect() {
        // ε ≡ 1 makes κ₂ = κ₁ and both amplitudes vanish identically.
        let eps = Complex64::new(1.0, 0.0);
        for freq in [Frequency::Imaginary(1.0e14), Frequency::Real(1.0e14)] {
            for k in [0.0, 1.0e5, 1.0e7] {
                let k1 = kappa_vacuum(k, freq).value();
                let k2 = kappa_medium(k, freq, eps).value();
                assert_eq!(r_s_from_kappas(k1, k2), Complex64::new(0.0, 0.0));
                assert_eq!(r_p_from_kappas(eps, k1, k2), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn perfect_conductor_limits() {
        // ε → ∞ at fixed k, ξ: r_s → −1, r_p → +1
        let freq = Frequency::Imaginary(1.0e14);
        let k = 1.0e6;
        let eps = Complex64::new(1.0e12, 0.0);
        let k1 = kappa_vacuum(k, freq).value();
        let k2 = kappa_medium(k, freq, eps).value();
        assert_relative_eq!(r_s_from_kappas(k1, k2).re, -1.0, epsilon = 1e-5);
        assert_relative_eq!(r_p_from_kappas(eps, k1, k2).re, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn rp_large_k_limit_is_eps_contrast() {
        // k → ∞ at ε(iξ) = 2: r_p → (ε−1)/(ε+1) = 1/3
        let xi = WP; // plasma at ξ = ωₚ has ε = 2
        let model = DielectricModel::plasma(WP).unwrap();
        let k = 1.0e12; // k ≫ ξ/c ≈ 3e7
        let rp = r_p(k, Frequency::Imaginary(xi), &model).unwrap();
        assert_relative_eq!(rp.re, 1.0 / 3.0, max_relative = 1e-8);
        let rs = r_s(k, Frequency::Imaginary(xi), &model).unwrap();
        assert!(rs.norm() < 1e-8, "r_s must vanish at large k, got {rs}");
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn drude_imag_axis_reference_point() {
        // reference: 40-digit evaluation of the closed formulas at
        // Drude(8.9e15, 8.9e13), ξ = 1e14, k = 1e6
        let model = DielectricModel::drude(WP, GAMMA).unwrap();
        let freq = Frequency::Imaginary(1.0e14);
        let rs = r_s(1.0e6, freq, &model).unwrap();
        let rp = r_p(1.0e6, freq, &model).unwrap();
        assert_eq!(rs.im, 0.0);
        assert_eq!(rp.im, 0.0);
        assert_relative_eq!(rs.re, -0.907016068732123556, max_relative = 1e-13);
        assert_relative_eq!(rp.re, 0.990262778539700209, max_relative = 1e-13);
    }

    #[test]
    fn drude_reflections_converge_to_plasma_for_small_gamma() {
        let plasma = DielectricModel::plasma(WP).unwrap();
        let freq = Frequency::Imaginary(3.0e13);
        let k = 2.0e6;
        let rs_pl = r_s(k, freq, &plasma).unwrap().re;
        let rp_pl = r_p(k, freq, &plasma).unwrap().re;
        let mut diffs = Vec::new();
        for gamma in [1e-2 * WP, 1e-4 * WP, 1e-6 * WP] {
            let drude = DielectricModel::drude(WP, gamma).unwrap();
            let ds = (r_s(k, freq, &drude).unwrap().re - rs_pl).abs();
            let dp = (r_p(k, freq, &drude).unwrap().re - rp_pl).abs();
            diffs.push(ds.max(dp));
        }
        // pointwise convergence, linear in γ: each 100× reduction of γ
        // shrinks the gap by ~100×
        assert!(diffs[0] > diffs[1] && diffs[1] > diffs[2]);
        for pair in diffs.windows(2) {
            let contraction = pair[1] / pair[0];
            assert!(
                contraction > 1e-2 / 3.0 && contraction < 3.0 * 1e-2,
                "expected ~1e-2 contraction per 100× γ step, got {contraction:e}"
            );
        }
    }

    #[test]
    fn passivity_in_propagating_sector() {
        let model = DielectricModel::drude(WP, GAMMA).unwrap();
        let omega = 1.0e15;
        let koc = omega / C;
        for frac in [0.0, 0.3, 0.7, 0.99] {
            let k = frac * koc;
            let rs = r_s(k, Frequency::Real(omega), &model).unwrap();
            let rp = r_p(k, Frequency::Real(omega), &model).unwrap();
            assert!(rs.norm() <= 1.0 + 1e-12, "|r_s| = {} > 1", rs.norm());
            assert!(rp.norm() <= 1.0 + 1e-12, "|r_p| = {} > 1", rp.norm());
        }
    }

    proptest! {
        #[test]
        fn imag_axis_amplitude_ranges(
            log_k in -2.0f64..9.0,
            log_xi in 9.0f64..17.0,
            drude in proptest::bool::ANY,
        ) {
            let k = 10f64.powf(log_k);
            let xi = 10f64.powf(log_xi);
            let model = if drude {
                DielectricModel::drude(WP, GAMMA).unwrap()
            } else {
                DielectricModel::plasma(WP).unwrap()
            };
            let freq = Frequency::Imaginary(xi);
            let rs = r_s(k, freq, &model).unwrap();
            let rp = r_p(k, freq, &model).unwrap();
            prop_assert_eq!(rs.im, 0.0);
            prop_assert_eq!(rp.im, 0.0);
            prop_assert!(rs.re > -1.0 && rs.re <= 0.0, "r_s = {} out of (-1, 0]", rs.re);
            prop_assert!(rp.re >= 0.0 && rp.re < 1.0, "r_p = {} out of [0, 1)", rp.re);
        }
    }
}
