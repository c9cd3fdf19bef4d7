//! Sweep execution over the (L, T) grid.
//!
//! Points are evaluated in parallel and gathered by index, so the output
//! ordering (L outer ascending, T inner as listed) and the emitted bytes are
//! deterministic. A convergence failure at one point is recorded in its row
//! and never aborts the sweep.

use magcp_core::energy::EnergyError;
use magcp_core::{
    free_energy_equilibrium, free_energy_ground_2level, free_energy_state,
    free_energy_zero_temperature, green_imag, green_static, matsubara_frequency,
    polarizability_imag, DielectricModel, FreeEnergyResult,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{MethodKind, StateKind, SweepConfig};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("normalization reference F_pl(1 um, 0 K) failed: {0}")]
    Reference(#[from] EnergyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    ConvergenceFailure,
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::ConvergenceFailure => "convergence_failure",
        }
    }
}

/// One free-energy sweep row; value fields are empty on failure.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub l_m: f64,
    pub t_k: f64,
    pub state: &'static str,
    pub method: &'static str,
    pub material: &'static str,
    pub f_j: Option<f64>,
    pub f_normalized: Option<f64>,
    pub n_terms: Option<usize>,
    pub est_error_j: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    /// Computed F_pl(1 μm, 0 K) shared by every normalized value in the file.
    pub reference: Option<f64>,
}

fn temperatures(cfg: &SweepConfig) -> Vec<f64> {
    if cfg.method == MethodKind::ZeroTIntegral {
        vec![0.0]
    } else {
        cfg.t_list.clone()
    }
}

fn grid_points(cfg: &SweepConfig) -> Vec<(f64, f64)> {
    let ts = temperatures(cfg);
    let mut pts = Vec::with_capacity(cfg.l_grid.len() * ts.len());
    for &l in &cfg.l_grid {
        for &t in &ts {
            pts.push((l, t));
        }
    }
    pts
}

fn evaluate_point(cfg: &SweepConfig, l: f64, t: f64) -> Result<FreeEnergyResult, EnergyError> {
    match cfg.method {
        MethodKind::EquilibriumSeries => {
            free_energy_equilibrium(&cfg.atom, &cfg.model, l, t, cfg.tol)
        }
        MethodKind::ZeroTIntegral => {
            free_energy_zero_temperature(&cfg.atom, &cfg.model, l, cfg.tol)
        }
        MethodKind::Eq1Full => {
            let scheme = match cfg.state {
                StateKind::Ground => cfg.atom.ground_scheme(),
                StateKind::Excited => cfg.atom.excited_scheme(),
                StateKind::Thermal => unreachable!("rejected at validation"),
            };
            free_energy_state(&scheme, &cfg.model, l, t, cfg.tol)
        }
        MethodKind::Eq6Approx => free_energy_ground_2level(&cfg.atom, &cfg.model, l, t, cfg.tol),
    }
}

/// Computed reference for scaled output: the plasma-model zero-temperature
/// free energy at L = 1 μm for the configured atom and plasma frequency.
/// Always computed, never a hard-coded constant, so normalized curves stay
/// self-consistent if the absolute scale shifts.
pub fn normalization_reference(cfg: &SweepConfig) -> Result<f64, SweepError> {
    let plasma =
        DielectricModel::plasma(cfg.model.omega_p()).expect("omega_p validated at config parse");
    Ok(free_energy_zero_temperature(&cfg.atom, &plasma, 1.0e-6, cfg.tol)?.value)
}

/// Run the configured free-energy sweep: one row per (L, T) pair.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    let reference = if cfg.normalize {
        Some(normalization_reference(cfg)?)
    } else {
        None
    };

    let rows = grid_points(cfg)
        .into_par_iter()
        .map(|(l, t)| {
            let base = SweepRow {
                l_m: l,
                t_k: t,
                state: cfg.state.label(),
                method: cfg.method.label(),
                material: cfg.model.label(),
                f_j: None,
                f_normalized: None,
                n_terms: None,
                est_error_j: None,
                status: RowStatus::ConvergenceFailure,
            };
            match evaluate_point(cfg, l, t) {
                Ok(r) => {
                    let r = match reference {
                        Some(nref) => r.with_normalization(nref),
                        None => r,
                    };
                    SweepRow {
                        f_j: Some(r.value),
                        f_normalized: r.normalized(),
                        n_terms: Some(r.n_terms),
                        est_error_j: Some(r.est_error),
                        status: RowStatus::Ok,
                        ..base
                    }
                }
                Err(_) => base,
            }
        })
        .collect();

    Ok(SweepOutput { rows, reference })
}

/// Green-tensor diagnostic row: components at the first Matsubara frequency
/// of the row temperature and at zero frequency.
#[derive(Debug, Clone)]
pub struct GreenRow {
    pub l_m: f64,
    pub t_k: f64,
    pub material: &'static str,
    pub xi_rad_s: f64,
    pub h_xx_imag: Option<f64>,
    pub h_zz_imag: Option<f64>,
    pub h_xx_static: Option<f64>,
    pub h_zz_static: Option<f64>,
    pub status: RowStatus,
}

pub fn run_sweep_green(cfg: &SweepConfig) -> Vec<GreenRow> {
    grid_points(cfg)
        .into_par_iter()
        .map(|(l, t)| {
            let xi = if t > 0.0 {
                matsubara_frequency(1, t)
            } else {
                0.0
            };
            let imag = (xi > 0.0)
                .then(|| green_imag(l, xi, &cfg.model, cfg.tol))
                .transpose();
            let stat = green_static(l, &cfg.model);
            let status = match (&imag, &stat) {
                (Ok(_), Ok(_)) => RowStatus::Ok,
                _ => RowStatus::ConvergenceFailure,
            };
            let imag = imag.ok().flatten();
            let stat = stat.ok();
            GreenRow {
                l_m: l,
                t_k: t,
                material: cfg.model.label(),
                xi_rad_s: xi,
                h_xx_imag: imag.map(|g| g.h_xx),
                h_zz_imag: imag.map(|g| g.h_zz),
                h_xx_static: stat.map(|g| g.h_xx),
                h_zz_static: stat.map(|g| g.h_zz),
                status,
            }
        })
        .collect()
}

/// Polarizability diagnostic row at the first Matsubara frequency.
#[derive(Debug, Clone)]
pub struct PolarizabilityRow {
    pub l_m: f64,
    pub t_k: f64,
    pub state: &'static str,
    pub xi_rad_s: f64,
    pub beta_xx: f64,
    pub beta_zz: f64,
    pub thermal_factor: Option<f64>,
}

pub fn run_sweep_polarizability(cfg: &SweepConfig) -> Vec<PolarizabilityRow> {
    grid_points(cfg)
        .into_iter()
        .map(|(l, t)| {
            let xi = if t > 0.0 {
                matsubara_frequency(1, t)
            } else {
                0.0
            };
            let (tensor, factor) = match cfg.state {
                StateKind::Thermal => (
                    cfg.atom.polarizability_thermal(t, xi),
                    Some(cfg.atom.thermal_factor(t)),
                ),
                StateKind::Ground => (polarizability_imag(&cfg.atom.ground_scheme(), xi), None),
                StateKind::Excited => (polarizability_imag(&cfg.atom.excited_scheme(), xi), None),
            };
            PolarizabilityRow {
                l_m: l,
                t_k: t,
                state: cfg.state.label(),
                xi_rad_s: xi,
                beta_xx: tensor.xx(),
                beta_zz: tensor.zz(),
                thermal_factor: factor,
            }
        })
        .collect()
}
