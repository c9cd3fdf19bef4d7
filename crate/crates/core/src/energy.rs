//! Casimir-Polder free energies.
//!
//! Equilibrium form (thermal atom): F(L,T) = −k_BT Σ'_{n≥0} β^T_ij(iξ_n)
//! H_ji(L,iξ_n), with ξ_n = 2πn k_BT/ħ and the n = 0 term at half weight,
//! evaluated with the analytic static Green tensor. The T → 0 limit turns
//! the sum into (ħ/2π)∫₀^∞ dξ of the same integrand.
//!
//! State-resolved form: the same nonresonant series with the state's
//! polarizability plus the resonant term Σ_b n(ω_ba) μ_i μ_j Re H_ji(L,ω_ba).
//! Re H at negative ω_ba is mapped to Re H(|ω_ba|) (reality of the
//! time-domain response); all sign physics lives in the signed photon
//! number and the signed transition frequencies of the polarizability.
//!
//! Two-level ground-state shortcut, valid for k_BT ≫ ħΩ_m:
//!
//!   F ≈ −2k_BT Σ_{n≥1} β^g(iξ_n) H_xx(L,iξ_n)
//!       + k_BT β^g(0) { Re[H_xx(L,Ω_m)] − H_xx(L,0) },
//!
//! where the factor 2 accounts for the xx + yy trace and β^g is the scalar
//! in-plane component.

use std::cell::Cell;
use std::f64::consts::PI;

use thiserror::Error;

use crate::atom::{self, AtomError, LevelScheme, TwoLevelAtom};
use crate::constants::{C, H_BAR, K_B};
use crate::green::{self, GreenDiag, GreenError};
use crate::material::DielectricModel;
use crate::quad::{self, QuadConfig, QuadError};

/// Free energy with convergence metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyResult {
    /// Free energy, J.
    pub value: f64,
    /// Matsubara terms summed; 0 marks the frequency-integral path.
    pub n_terms: usize,
    /// Absolute error estimate, J.
    pub est_error: f64,
    /// Reference value used for scaled output, if any.
    pub normalization: Option<f64>,
}

impl FreeEnergyResult {
    pub fn with_normalization(self, reference: f64) -> Self {
        Self {
            normalization: Some(reference),
            ..self
        }
    }

    /// Value divided by the stored reference.
    pub fn normalized(&self) -> Option<f64> {
        self.normalization.map(|n| self.value / n)
    }
}

/// Controls for the Matsubara summation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Relative tolerance on the free energy.
    pub rel_tol: f64,
    /// Hard budget on the number of series terms.
    pub max_terms: usize,
    /// Delegate to the frequency integral when the projected term count
    /// c/(Lξ₁) exceeds this and the Matsubara spacing resolves every
    /// integrand scale; `None` disables delegation.
    pub delegate_threshold: Option<usize>,
    /// Relative tolerance per Green-tensor call.
    pub green_tol: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_terms: 1_000_000,
            delegate_threshold: Some(10_000),
            green_tol: green::DEFAULT_TOL,
        }
    }
}

impl SeriesOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("temperature must be positive, got {0:e} K")]
    NonPositiveTemperature(f64),
    #[error("distance must be positive, got {0:e} m")]
    InvalidDistance(f64),
    #[error("relative tolerance must lie in (0, 1), got {0:e}")]
    InvalidTolerance(f64),
    #[error("green tensor: {0}")]
    Green(#[from] GreenError),
    #[error("atom: {0}")]
    Atom(#[from] AtomError),
    #[error(
        "Matsubara series did not converge within {n_terms} terms (partial sum {value:e} J, error {est_error:e} J)"
    )]
    SeriesConvergence {
        n_terms: usize,
        value: f64,
        est_error: f64,
    },
    #[error("frequency integral did not converge (value {value:e}, error {abs_error:e})")]
    IntegralConvergence { value: f64, abs_error: f64 },
}

/// Matsubara frequency ξ_n = 2πn k_BT/ħ.
pub fn matsubara_frequency(n: u64, t: f64) -> f64 {
    assert!(t > 0.0, "temperature must be positive");
    2.0 * PI * n as f64 * K_B * t / H_BAR
}

/// Thermal wavelength Λ_T = ħc/(4π k_BT), the distance beyond which the
/// n ≥ 1 Matsubara terms decay exponentially.
pub fn thermal_wavelength(t: f64) -> f64 {
    assert!(t > 0.0, "temperature must be positive");
    H_BAR * C / (4.0 * PI * K_B * t)
}

fn check_inputs(l: f64, rel_tol: f64) -> Result<(), EnergyError> {
    if l <= 0.0 || !l.is_finite() {
        return Err(EnergyError::InvalidDistance(l));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 || rel_tol >= 1.0 {
        return Err(EnergyError::InvalidTolerance(rel_tol));
    }
    Ok(())
}

fn check_temperature(t: f64) -> Result<(), EnergyError> {
    if t <= 0.0 || !t.is_finite() {
        return Err(EnergyError::NonPositiveTemperature(t));
    }
    Ok(())
}

/// Diagonal polarizability weights (β_xx + β_yy, β_zz) at iξ for a scheme.
fn scheme_beta(scheme: &LevelScheme) -> impl Fn(f64) -> (f64, f64) + '_ {
    move |xi: f64| {
        let tensor = atom::polarizability_imag(scheme, xi);
        (tensor.planar_sum(), tensor.zz())
    }
}

struct SeriesOutcome {
    sum: f64,
    n_terms: usize,
    tail_error: f64,
    quad_error: f64,
}

/// Σ'_n [β_pl(ξ_n) H_xx(L,iξ_n) + β_zz(ξ_n) H_zz(L,iξ_n)], the ½-weighted
/// n = 0 term (analytic static Green tensor) included on request.
///
/// Truncation: stop once the term magnitude has stayed below
/// rel_tol·|partial sum| for 3 consecutive terms (guarding against
/// accidental near-zeros) and the geometric tail bound — last magnitude
/// times r/(1−r) with r the largest of the last three term ratios — plus
/// the accumulated quadrature error fits the same budget.
fn matsubara_sum<B: Fn(f64) -> (f64, f64)>(
    beta: &B,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
    include_zeroth: bool,
) -> Result<SeriesOutcome, EnergyError> {
    let xi1 = matsubara_frequency(1, t);
    let mut sum = 0.0;
    let mut quad_error = 0.0;
    let mut n_terms = 0usize;

    if include_zeroth {
        let gs = green::green_static(l, model)?;
        let (bpl, bzz) = beta(0.0);
        sum += 0.5 * (bpl * gs.h_xx + bzz * gs.h_zz);
        quad_error += 0.5 * gs.est_error * (bpl.abs() + bzz.abs());
        n_terms += 1;
    }

    let mut small_run = 0usize;
    let mut ratios = [f64::NAN; 3];
    let mut prev_mag = f64::NAN;

    for n in 1..=opts.max_terms {
        let xi = n as f64 * xi1;
        let g = green::green_imag(l, xi, model, opts.green_tol)?;
        let (bpl, bzz) = beta(xi);
        let term = bpl * g.h_xx + bzz * g.h_zz;
        sum += term;
        quad_error += g.est_error * (bpl.abs() + bzz.abs());
        n_terms += 1;

        let mag = term.abs();
        if prev_mag.is_finite() && prev_mag > 0.0 {
            ratios[n % 3] = mag / prev_mag;
        }
        prev_mag = mag;

        if mag <= opts.rel_tol * sum.abs() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let r = ratios
                .iter()
                .copied()
                .filter(|r| r.is_finite())
                .fold(0.0f64, f64::max);
            // factor 2 guards against the observed ratio drifting upward
            // (the β decay weakens as 1/n² flattens), which would otherwise
            // let the geometric bound undershoot the true remainder
            let tail = if mag == 0.0 {
                0.0
            } else if r > 0.0 && r < 1.0 {
                2.0 * mag * r / (1.0 - r)
            } else {
                f64::INFINITY
            };
            if tail + quad_error <= opts.rel_tol * sum.abs() {
                return Ok(SeriesOutcome {
                    sum,
                    n_terms,
                    tail_error: tail,
                    quad_error,
                });
            }
        }
    }

    Err(EnergyError::SeriesConvergence {
        n_terms,
        value: -K_B * t * sum,
        est_error: K_B * t * (prev_mag + quad_error),
    })
}

/// I = ∫₀^∞ dξ [β_pl(ξ) H_xx(L,iξ) + β_zz(ξ) H_zz(L,iξ)] with breakpoints at
/// every integrand knee (polarizability resonances, light-cone scale c/L,
/// material scales).
fn frequency_integral<B: Fn(f64) -> (f64, f64)>(
    beta: &B,
    omega_scales: &[f64],
    model: &DielectricModel,
    l: f64,
    rel_tol: f64,
    green_tol: f64,
) -> Result<(f64, f64), EnergyError> {
    let xi_max = 30.0 * C / l;
    let mut bps: Vec<f64> = Vec::new();
    for &w in omega_scales {
        for m in [0.1, 1.0, 10.0] {
            bps.push(w * m);
        }
    }
    for m in [0.01, 0.1, 1.0, 10.0] {
        bps.push(C / l * m);
    }
    bps.push(model.omega_p());
    let gamma = model.gamma();
    if gamma > 0.0 {
        bps.push(gamma);
        // scale where the Drude surface response turns on: ε(iξ)ξ²/c² ~ 1/L²
        bps.push(gamma * C * C / (model.omega_p().powi(2) * l * l));
    }
    bps.retain(|x| *x > 0.0 && *x < xi_max);

    let failure: Cell<Option<GreenError>> = Cell::new(None);
    let f = |xi: f64| {
        if xi <= 0.0 {
            return 0.0;
        }
        match green::green_imag(l, xi, model, green_tol) {
            Ok(g) => {
                let (bpl, bzz) = beta(xi);
                bpl * g.h_xx + bzz * g.h_zz
            }
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    // headroom so the reported estimate (quadrature + inner Green noise)
    // still fits the caller's budget
    let cfg = QuadConfig {
        rel_tol: 0.7 * rel_tol,
        max_intervals: 4000,
        ..QuadConfig::default()
    };
    let q = quad::integrate_with_breakpoints(f, 0.0, xi_max, &bps, &cfg);
    if let Some(e) = failure.take() {
        return Err(EnergyError::Green(e));
    }
    let q = q.map_err(|e| match e {
        QuadError::Convergence {
            value, abs_error, ..
        } => EnergyError::IntegralConvergence { value, abs_error },
        QuadError::InvalidBounds(a, b) => EnergyError::IntegralConvergence {
            value: a,
            abs_error: b,
        },
    })?;
    // the inner Green calls contribute noise at their own tolerance
    Ok((q.value, q.abs_error + 3.0 * green_tol * q.value.abs()))
}

fn omega_scales(scheme: &LevelScheme) -> Vec<f64> {
    let mut scales: Vec<f64> = scheme
        .transitions()
        .iter()
        .map(|t| t.omega_ba.abs())
        .collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    scales
}

/// Projected number of series terms up to the exponential cutoff; the series
/// → integral replacement additionally needs the Matsubara spacing ξ₁ to
/// resolve every scale the integrand varies on.
fn delegation(
    opts: &SeriesOptions,
    model: &DielectricModel,
    l: f64,
    t: f64,
    omega_min: f64,
) -> Option<f64> {
    let threshold = opts.delegate_threshold?;
    let xi1 = matsubara_frequency(1, t);
    if C / (l * xi1) <= threshold as f64 {
        return None;
    }
    let mut scale = omega_min.min(C / l);
    let gamma = model.gamma();
    if gamma > 0.0 {
        scale = scale.min(gamma * C * C / (model.omega_p().powi(2) * l * l));
    }
    if xi1 > scale / 10.0 {
        return None;
    }
    // honest discretization allowance for the reported error
    Some((xi1 / scale).powi(2))
}

fn nonresonant_sum<B: Fn(f64) -> (f64, f64)>(
    beta: &B,
    scales: &[f64],
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    if let Some(discretization) = delegation(opts, model, l, t, scales[0]) {
        let (i, err) = frequency_integral(beta, scales, model, l, opts.rel_tol, opts.green_tol)?;
        let value = -H_BAR / (2.0 * PI) * i;
        return Ok(FreeEnergyResult {
            value,
            n_terms: 0,
            est_error: H_BAR / (2.0 * PI) * err + discretization * value.abs(),
            normalization: None,
        });
    }
    let out = matsubara_sum(beta, model, l, t, opts, true)?;
    Ok(FreeEnergyResult {
        value: -K_B * t * out.sum,
        n_terms: out.n_terms,
        est_error: K_B * t * (out.tail_error + out.quad_error),
        normalization: None,
    })
}

/// Equilibrium free energy (thermal two-level atom), Matsubara series.
pub fn free_energy_equilibrium(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    tol: f64,
) -> Result<FreeEnergyResult, EnergyError> {
    free_energy_equilibrium_opts(atom, model, l, t, &SeriesOptions::with_rel_tol(tol))
}

pub fn free_energy_equilibrium_opts(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    check_inputs(l, opts.rel_tol)?;
    check_temperature(t)?;
    let factor = atom.thermal_factor(t);
    let scheme = atom.ground_scheme();
    let ground = scheme_beta(&scheme);
    let beta = move |xi: f64| {
        let (bpl, bzz) = ground(xi);
        (factor * bpl, factor * bzz)
    };
    nonresonant_sum(&beta, &[atom.omega_m()], model, l, t, opts)
}

/// The n = 0 contribution of the equilibrium series, −k_BT·½·β^T_ij(0)
/// H_ji(L,0). Exactly zero for a dissipative Drude metal; strictly positive
/// for a plasma.
pub fn equilibrium_zeroth_term(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
) -> Result<f64, EnergyError> {
    check_inputs(l, 0.5)?;
    check_temperature(t)?;
    let gs = green::green_static(l, model)?;
    let tensor = atom.polarizability_thermal(t, 0.0);
    Ok(-K_B * t * 0.5 * (tensor.planar_sum() * gs.h_xx + tensor.zz() * gs.h_zz))
}

/// The n ≥ 1 part of a Matsubara series with the given diagonal weights;
/// delegation replaces the sum by the frequency integral minus the
/// half-weight endpoint the integral effectively contains.
fn matsubara_tail<B: Fn(f64) -> (f64, f64)>(
    beta: &B,
    scales: &[f64],
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
    g_static: &green::GreenDiag,
) -> Result<FreeEnergyResult, EnergyError> {
    if let Some(discretization) = delegation(opts, model, l, t, scales[0]) {
        let (i, err) = frequency_integral(beta, scales, model, l, opts.rel_tol, opts.green_tol)?;
        let (bpl0, bzz0) = beta(0.0);
        let endpoint = 0.5 * (bpl0 * g_static.h_xx + bzz0 * g_static.h_zz);
        let value = -H_BAR / (2.0 * PI) * i + K_B * t * endpoint;
        return Ok(FreeEnergyResult {
            value,
            n_terms: 0,
            est_error: H_BAR / (2.0 * PI) * err + discretization * value.abs(),
            normalization: None,
        });
    }
    let out = matsubara_sum(beta, model, l, t, opts, false)?;
    Ok(FreeEnergyResult {
        value: -K_B * t * out.sum,
        n_terms: out.n_terms,
        est_error: K_B * t * (out.tail_error + out.quad_error),
        normalization: None,
    })
}

/// The n ≥ 1 terms of the equilibrium series, at the precision of their own
/// magnitude. Together with [`equilibrium_zeroth_term`] this reconstructs
/// [`free_energy_equilibrium`]; computing the tail as a difference of the
/// two would instead inherit the truncation error of the far larger total
/// whenever the n = 0 term dominates (plasma beyond the thermal wavelength).
pub fn equilibrium_matsubara_tail(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    tol: f64,
) -> Result<FreeEnergyResult, EnergyError> {
    equilibrium_matsubara_tail_opts(atom, model, l, t, &SeriesOptions::with_rel_tol(tol))
}

pub fn equilibrium_matsubara_tail_opts(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    check_inputs(l, opts.rel_tol)?;
    check_temperature(t)?;
    let factor = atom.thermal_factor(t);
    let scheme = atom.ground_scheme();
    let ground = scheme_beta(&scheme);
    let beta = move |xi: f64| {
        let (bpl, bzz) = ground(xi);
        (factor * bpl, factor * bzz)
    };
    let g_static = green::green_static(l, model)?;
    matsubara_tail(&beta, &[atom.omega_m()], model, l, t, opts, &g_static)
}

/// Zero-temperature limit, F = −(ħ/2π)∫₀^∞ dξ β^g_ij(iξ) H_ji(L,iξ).
pub fn free_energy_zero_temperature(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    tol: f64,
) -> Result<FreeEnergyResult, EnergyError> {
    check_inputs(l, tol)?;
    let scheme = atom.ground_scheme();
    let beta = scheme_beta(&scheme);
    let (i, err) = frequency_integral(&beta, &[atom.omega_m()], model, l, tol, green::DEFAULT_TOL)?;
    Ok(FreeEnergyResult {
        value: -H_BAR / (2.0 * PI) * i,
        n_terms: 0,
        est_error: H_BAR / (2.0 * PI) * err,
        normalization: None,
    })
}

/// One refinement pass for composite results: the series tolerance applies
/// to the nonresonant part alone, so when it partially cancels against the
/// resonant term the combined estimate can exceed the budget on the smaller
/// total. Recompute once with a tolerance shrunk by the observed
/// cancellation; near a sign change of the total no tolerance can restore a
/// relative bound and the refined estimate is reported as is.
fn refine_if_over_budget<F>(
    first: FreeEnergyResult,
    opts: &SeriesOptions,
    compute: F,
) -> Result<FreeEnergyResult, EnergyError>
where
    F: Fn(&SeriesOptions) -> Result<FreeEnergyResult, EnergyError>,
{
    let budget = opts.rel_tol * first.value.abs();
    if first.value == 0.0 || first.est_error <= budget {
        return Ok(first);
    }
    let shrink = (0.5 * budget / first.est_error).max(1e-4);
    let tight = SeriesOptions {
        rel_tol: (opts.rel_tol * shrink).max(1e-12),
        green_tol: (opts.green_tol * shrink).max(1e-12),
        ..*opts
    };
    compute(&tight)
}

/// State-resolved free energy: nonresonant Matsubara series for the given
/// level scheme plus the resonant thermal-photon term.
pub fn free_energy_state(
    scheme: &LevelScheme,
    model: &DielectricModel,
    l: f64,
    t: f64,
    tol: f64,
) -> Result<FreeEnergyResult, EnergyError> {
    free_energy_state_opts(scheme, model, l, t, &SeriesOptions::with_rel_tol(tol))
}

pub fn free_energy_state_opts(
    scheme: &LevelScheme,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    let first = free_energy_state_once(scheme, model, l, t, opts)?;
    refine_if_over_budget(first, opts, |tight| {
        free_energy_state_once(scheme, model, l, t, tight)
    })
}

fn free_energy_state_once(
    scheme: &LevelScheme,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    check_inputs(l, opts.rel_tol)?;
    check_temperature(t)?;
    let beta = scheme_beta(scheme);
    let scales = omega_scales(scheme);
    let nonresonant = nonresonant_sum(&beta, &scales, model, l, t, opts)?;

    let mut resonant = 0.0;
    let mut resonant_err = 0.0;
    let mut cache: Vec<(f64, GreenDiag)> = Vec::new();
    for tr in scheme.transitions() {
        let w = tr.omega_ba.abs();
        let g = match cache.iter().find(|(cw, _)| *cw == w) {
            Some((_, g)) => *g,
            None => {
                let g = green::green_real(l, w, model, opts.green_tol)?;
                cache.push((w, g));
                g
            }
        };
        let n = atom::photon_number(tr.omega_ba, t)?;
        resonant += n * (tr.planar_weight() * g.h_xx + tr.axial_weight() * g.h_zz);
        resonant_err += n.abs() * (tr.planar_weight() + tr.axial_weight()) * g.est_error;
    }

    Ok(FreeEnergyResult {
        value: nonresonant.value + resonant,
        n_terms: nonresonant.n_terms,
        est_error: nonresonant.est_error + resonant_err,
        normalization: None,
    })
}

/// Two-level ground-state free energy in the k_BT ≫ ħΩ_m regime.
pub fn free_energy_ground_2level(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    tol: f64,
) -> Result<FreeEnergyResult, EnergyError> {
    free_energy_ground_2level_opts(atom, model, l, t, &SeriesOptions::with_rel_tol(tol))
}

pub fn free_energy_ground_2level_opts(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    let first = free_energy_ground_2level_once(atom, model, l, t, opts)?;
    refine_if_over_budget(first, opts, |tight| {
        free_energy_ground_2level_once(atom, model, l, t, tight)
    })
}

fn free_energy_ground_2level_once(
    atom: &TwoLevelAtom,
    model: &DielectricModel,
    l: f64,
    t: f64,
    opts: &SeriesOptions,
) -> Result<FreeEnergyResult, EnergyError> {
    check_inputs(l, opts.rel_tol)?;
    check_temperature(t)?;
    let scheme = atom.ground_scheme();
    let beta = scheme_beta(&scheme);
    let g_static = green::green_static(l, model)?;

    // first line: −2k_BT Σ_{n≥1} β^g(iξ_n) H_xx (the factor 2 is the
    // planar trace, carried by beta)
    let line1 = matsubara_tail(&beta, &[atom.omega_m()], model, l, t, opts, &g_static)?;

    // second line: k_BT β^g(0) { Re[H_xx(L,Ω_m)] − H_xx(L,0) }
    let g_res = green::green_real(l, atom.omega_m(), model, opts.green_tol)?;
    let beta0 = atom.polarizability_ground_xx(0.0);
    let line2 = K_B * t * beta0 * (g_res.h_xx - g_static.h_xx);
    let line2_err = K_B * t * beta0 * (g_res.est_error + g_static.est_error);

    Ok(FreeEnergyResult {
        value: line1.value + line2,
        n_terms: line1.n_terms,
        est_error: line1.est_error + line2_err,
        normalization: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const WP: f64 = 8.9e15;
    const GAMMA: f64 = 8.9e13;
    const OMEGA_M: f64 = 3.0e9;

    fn drude() -> DielectricModel {
        DielectricModel::drude(WP, GAMMA).unwrap()
    }
    fn plasma() -> DielectricModel {
        DielectricModel::plasma(WP).unwrap()
    }
    fn atom() -> TwoLevelAtom {
        TwoLevelAtom::with_bohr_magneton(OMEGA_M).unwrap()
    }

    #[test]
    fn matsubara_frequencies() {
        assert_eq!(matsubara_frequency(0, 300.0), 0.0);
        // constant arithmetic with the CODATA table
        assert_relative_eq!(
            matsubara_frequency(1, 300.0),
            2.46779025515e14,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            matsubara_frequency(1, 1.0),
            8.22596751718e11,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            matsubara_frequency(7, 1.0),
            7.0 * 8.22596751718e11,
            max_relative = 1e-12
        );
    }

    #[test]
    fn thermal_wavelength_values() {
        assert_relative_eq!(
            thermal_wavelength(300.0),
            6.07410733903e-7,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            thermal_wavelength(1.0),
            1.82223220171e-4,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            thermal_wavelength(2.0),
            0.5 * thermal_wavelength(1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn equilibrium_is_repulsive_for_both_models() {
        let a = atom();
        for model in [drude(), plasma()] {
            for l in [1e-7, 1e-6] {
                let f = free_energy_equilibrium(&a, &model, l, 300.0, 1e-6).unwrap();
                assert!(f.value > 0.0, "F must be repulsive ({model:?}, L={l:e})");
                assert!(f.est_error <= 1e-6 * f.value.abs());
                assert!(f.n_terms > 0);
            }
        }
    }

    #[test]
    fn equilibrium_reference_values_at_room_temperature() {
        // reference: 25-digit independent summation (mpmath quadrature per
        // term) at L = 1 μm, T = 300 K. The Drude value sits nine orders
        // below the plasma one: thermal decoupling versus static shielding.
        let a = atom();
        let f_dr = free_energy_equilibrium(&a, &drude(), 1e-6, 300.0, 1e-10).unwrap();
        assert_relative_eq!(f_dr.value, 3.3919210230663e-46, max_relative = 1e-9);
        let f_pl = free_energy_equilibrium(&a, &plasma(), 1e-6, 300.0, 1e-10).unwrap();
        assert_relative_eq!(f_pl.value, 9.7346078703134e-37, max_relative = 1e-9);
    }

    #[test]
    fn zero_temperature_reference_values_across_regimes() {
        // reference: 25-digit quadrature; 0.1 μm sits in the weak-shielding
        // regime (ωₚL/c ≈ 3), 10 μm in the strongly shielded one
        let a = atom();
        let f_short = free_energy_zero_temperature(&a, &plasma(), 1e-7, 1e-8).unwrap();
        assert_relative_eq!(f_short.value, 4.65519687739e-34, max_relative = 1e-6);
        let f_long = free_energy_zero_temperature(&a, &plasma(), 1e-5, 1e-8).unwrap();
        assert_relative_eq!(f_long.value, 1.06429977087e-39, max_relative = 1e-6);
    }

    #[test]
    fn zeroth_term_dichotomy() {
        let a = atom();
        let z_drude = equilibrium_zeroth_term(&a, &drude(), 1e-6, 300.0).unwrap();
        assert_eq!(z_drude, 0.0);
        let z_plasma = equilibrium_zeroth_term(&a, &plasma(), 1e-6, 300.0).unwrap();
        assert!(z_plasma > 0.0);
    }

    #[test]
    fn zeroth_term_plus_tail_reconstructs_equilibrium() {
        let a = atom();
        for model in [drude(), plasma()] {
            for (l, t) in [(1e-7, 300.0), (1e-6, 300.0), (1e-6, 4.0)] {
                let opts = SeriesOptions::with_rel_tol(1e-8);
                let total = free_energy_equilibrium_opts(&a, &model, l, t, &opts).unwrap();
                let z = equilibrium_zeroth_term(&a, &model, l, t).unwrap();
                let tail = equilibrium_matsubara_tail_opts(&a, &model, l, t, &opts).unwrap();
                let budget = total.est_error + tail.est_error + 1e-14 * total.value.abs();
                assert!(
                    (z + tail.value - total.value).abs() <= budget,
                    "decomposition off by {:e} (budget {:e}) at ({model:?}, L={l:e}, T={t})",
                    (z + tail.value - total.value).abs(),
                    budget
                );
            }
        }
    }

    #[test]
    fn plasma_state_path_restores_zero_temperature_value_at_short_distance() {
        // With the exact photon number the −1/2 beyond n ≈ k_BT/ħΩ_m cancels
        // the linear-T pieces for the plasma, leaving ≈ −μ²H_xx(0) in the
        // non-retarded regime, i.e. the zero-temperature result.
        let a = atom();
        let l = 5e-8;
        let t = 1.0; // k_BT ≈ 44 ħΩ_m
        let f_state = free_energy_state(&a.ground_scheme(), &plasma(), l, t, 1e-6).unwrap();
        let f_zero = free_energy_zero_temperature(&a, &plasma(), l, 1e-8).unwrap();
        assert_relative_eq!(f_state.value, f_zero.value, max_relative = 0.05);
    }

    #[test]
    fn free_energy_scales_with_mu_squared() {
        let a1 = TwoLevelAtom::new(OMEGA_M, 9.274e-24).unwrap();
        let a2 = TwoLevelAtom::new(OMEGA_M, 2.0 * 9.274e-24).unwrap();
        let f1 = free_energy_equilibrium(&a1, &drude(), 1e-6, 300.0, 1e-8).unwrap();
        let f2 = free_energy_equilibrium(&a2, &drude(), 1e-6, 300.0, 1e-8).unwrap();
        assert_relative_eq!(f2.value, 4.0 * f1.value, max_relative = 1e-6);
    }

    #[test]
    fn zero_temperature_reference_value() {
        // plasma, ωₚ = 8.9e15, Ω_m = 3e9, μ = μ_B, L = 1 μm:
        // reference 9.73461077039e-37 J from a 30-digit double quadrature
        let f = free_energy_zero_temperature(&atom(), &plasma(), 1e-6, 1e-8).unwrap();
        assert_relative_eq!(f.value, 9.73461077039e-37, max_relative = 1e-6);
        assert_eq!(f.n_terms, 0);
    }

    #[test]
    fn series_approaches_integral_at_low_temperature() {
        // 1 mK keeps ξ₁ above Ω_m/10, so the series path runs honestly.
        // For the plasma the residual thermal effects at k_BT ≪ ħΩ_m are
        // exponentially small, leaving the two routes within their combined
        // tolerances (×3 slack).
        let a = atom();
        let tol_series = 1e-5;
        let tol_int = 1e-8;
        let opts = SeriesOptions {
            rel_tol: tol_series,
            ..SeriesOptions::default()
        };
        let f_series = free_energy_equilibrium_opts(&a, &plasma(), 1e-6, 1e-3, &opts).unwrap();
        assert!(f_series.n_terms > 0, "must not delegate at 1 mK");
        let f_int = free_energy_zero_temperature(&a, &plasma(), 1e-6, tol_int).unwrap();
        assert_relative_eq!(
            f_series.value,
            f_int.value,
            max_relative = 3.0 * (tol_series + tol_int)
        );
    }

    #[test]
    fn delegation_kicks_in_at_very_low_temperature() {
        // 10 μK at 1 μm: projected term count ≈ 3.6e7 and ξ₁ ≪ Ω_m
        let a = atom();
        let f = free_energy_equilibrium(&a, &plasma(), 1e-6, 1e-5, 1e-6).unwrap();
        assert_eq!(f.n_terms, 0, "expected the integral path");
        let f_int = free_energy_zero_temperature(&a, &plasma(), 1e-6, 1e-8).unwrap();
        assert_relative_eq!(f.value, f_int.value, max_relative = 1e-3);
    }

    #[test]
    fn state_and_equilibrium_agree_when_resonant_term_is_frozen() {
        // k_BT ≪ ħΩ_m: n(Ω_m) ≈ 0 and tanh ≈ 1, so the state-resolved
        // ground form approaches the equilibrium series.
        let a = TwoLevelAtom::with_bohr_magneton(1.0e13).unwrap();
        let t = 1.0; // ħΩ/k_BT ≈ 76
        let f_eq = free_energy_equilibrium(&a, &drude(), 1e-6, t, 1e-7).unwrap();
        let f_state = free_energy_state(&a.ground_scheme(), &drude(), 1e-6, t, 1e-7).unwrap();
        assert_relative_eq!(f_state.value, f_eq.value, max_relative = 1e-4);
    }

    #[test]
    fn state_matches_two_level_shortcut_at_high_temperature() {
        let a = atom();
        let t = 10.0; // k_BT/ħΩ_m ≈ 436
        let l = 1e-7;
        let f_full = free_energy_state(&a.ground_scheme(), &drude(), l, t, 1e-7).unwrap();
        let f_eq6 = free_energy_ground_2level(&a, &drude(), l, t, 1e-7).unwrap();
        // expansion error is O(ħΩ_m/k_BT) ≈ 2e-3
        assert_relative_eq!(f_full.value, f_eq6.value, max_relative = 1e-2);
    }

    #[test]
    fn excited_state_flips_the_sign_at_high_temperature() {
        let a = atom();
        let t = 10.0;
        let l = 1e-7;
        let f_g = free_energy_state(&a.ground_scheme(), &drude(), l, t, 1e-7).unwrap();
        let f_e = free_energy_state(&a.excited_scheme(), &drude(), l, t, 1e-7).unwrap();
        assert!(
            (f_e.value + f_g.value).abs() < 0.01 * f_g.value.abs(),
            "excited ≈ −ground: {:e} vs {:e}",
            f_e.value,
            f_g.value
        );
    }

    #[test]
    fn plasma_two_level_braces_nearly_cancel_in_non_retarded_regime() {
        // Re H_xx(L,Ω_m) ≈ H_xx(L,0) for the plasma at ωL/c ≪ 1, so the
        // second line nearly vanishes and F stays close to the first line.
        let a = atom();
        let l = 1e-6;
        let g_res = green::green_real(l, a.omega_m(), &plasma(), 1e-10).unwrap();
        let g_st = green::green_static(l, &plasma()).unwrap();
        let braces = g_res.h_xx - g_st.h_xx;
        assert!(
            braces.abs() < 1e-6 * g_st.h_xx.abs(),
            "braces residual {braces:e} vs H_static {:e}",
            g_st.h_xx
        );
    }

    #[test]
    fn drude_two_level_form_changes_sign_at_short_distance() {
        let a = atom();
        let t = 1.0;
        let f_short = free_energy_ground_2level(&a, &drude(), 1e-8, t, 1e-5).unwrap();
        let f_mid = free_energy_ground_2level(&a, &drude(), 3e-7, t, 1e-5).unwrap();
        assert!(
            f_short.value > 0.0,
            "repulsive at 10 nm, got {:e}",
            f_short.value
        );
        assert!(
            f_mid.value < 0.0,
            "attractive at 0.3 μm, got {:e}",
            f_mid.value
        );
    }

    #[test]
    fn truncation_is_sound_under_budget_doubling() {
        let a = atom();
        let base = SeriesOptions {
            rel_tol: 1e-7,
            ..SeriesOptions::default()
        };
        let doubled = SeriesOptions {
            max_terms: 2_000_000,
            rel_tol: 1e-9,
            ..base
        };
        let f1 = free_energy_equilibrium_opts(&a, &drude(), 1e-6, 300.0, &base).unwrap();
        let f2 = free_energy_equilibrium_opts(&a, &drude(), 1e-6, 300.0, &doubled).unwrap();
        assert!(
            (f1.value - f2.value).abs() <= f1.est_error,
            "refined value moved {:e}, more than est_error {:e}",
            (f1.value - f2.value).abs(),
            f1.est_error
        );
    }

    #[test]
    fn series_convergence_failure_is_reported() {
        let a = atom();
        let opts = SeriesOptions {
            rel_tol: 1e-10,
            max_terms: 5,
            delegate_threshold: None,
            green_tol: 1e-10,
        };
        let r = free_energy_equilibrium_opts(&a, &drude(), 1e-6, 300.0, &opts);
        assert!(matches!(r, Err(EnergyError::SeriesConvergence { .. })));
    }

    #[test]
    fn input_validation() {
        let a = atom();
        assert!(matches!(
            free_energy_equilibrium(&a, &drude(), -1.0, 300.0, 1e-8),
            Err(EnergyError::InvalidDistance(_))
        ));
        assert!(matches!(
            free_energy_equilibrium(&a, &drude(), 1e-6, 0.0, 1e-8),
            Err(EnergyError::NonPositiveTemperature(_))
        ));
        assert!(matches!(
            free_energy_equilibrium(&a, &drude(), 1e-6, 300.0, 0.0),
            Err(EnergyError::InvalidTolerance(_))
        ));
    }
}
