//! CSV emission.
//!
//! UTF-8, fixed header, floating-point fields in scientific notation with 17
//! significant digits. A leading '#'-prefixed comment block records the
//! config hash, the constants-table version and the dipole moment in use;
//! it carries no timestamps, so identical configs produce byte-identical
//! files.

use std::io::{self, Write};

use magcp_core::constants::CONSTANTS_VERSION;

use crate::sweep::{GreenRow, PolarizabilityRow, SweepRow};

pub const FREE_ENERGY_HEADER: &str =
    "L_m,T_K,state,method,material,F_J,F_normalized,n_terms,est_error_J,status";

pub const GREEN_HEADER: &str = "L_m,T_K,material,xi_rad_s,H_xx_imag_T2_per_J,H_zz_imag_T2_per_J,\
H_xx_static_T2_per_J,H_zz_static_T2_per_J,status";

pub const POLARIZABILITY_HEADER: &str =
    "L_m,T_K,state,xi_rad_s,beta_xx_J_per_T2,beta_zz_J_per_T2,thermal_factor";

/// Metadata for the leading comment block.
#[derive(Debug, Clone)]
pub struct CsvMeta {
    pub config_sha256: String,
    pub mu_j_per_t: f64,
}

/// Scientific notation with 17 significant digits.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn write_preamble<W: Write>(w: &mut W, meta: &CsvMeta, header: &str) -> io::Result<()> {
    writeln!(w, "# config_sha256: {}", meta.config_sha256)?;
    writeln!(w, "# constants: {CONSTANTS_VERSION}")?;
    writeln!(w, "# mu_J_per_T: {}", fmt(meta.mu_j_per_t))?;
    writeln!(w, "{header}")
}

pub fn write_free_energy_csv<W: Write>(
    w: &mut W,
    rows: &[SweepRow],
    meta: &CsvMeta,
) -> io::Result<()> {
    write_preamble(w, meta, FREE_ENERGY_HEADER)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt(r.l_m),
            fmt(r.t_k),
            r.state,
            r.method,
            r.material,
            fmt_opt(r.f_j),
            fmt_opt(r.f_normalized),
            r.n_terms.map(|n| n.to_string()).unwrap_or_default(),
            fmt_opt(r.est_error_j),
            r.status.label(),
        )?;
    }
    Ok(())
}

pub fn write_green_csv<W: Write>(w: &mut W, rows: &[GreenRow], meta: &CsvMeta) -> io::Result<()> {
    write_preamble(w, meta, GREEN_HEADER)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt(r.l_m),
            fmt(r.t_k),
            r.material,
            fmt(r.xi_rad_s),
            fmt_opt(r.h_xx_imag),
            fmt_opt(r.h_zz_imag),
            fmt_opt(r.h_xx_static),
            fmt_opt(r.h_zz_static),
            r.status.label(),
        )?;
    }
    Ok(())
}

pub fn write_polarizability_csv<W: Write>(
    w: &mut W,
    rows: &[PolarizabilityRow],
    meta: &CsvMeta,
) -> io::Result<()> {
    write_preamble(w, meta, POLARIZABILITY_HEADER)?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt(r.l_m),
            fmt(r.t_k),
            r.state,
            fmt(r.xi_rad_s),
            fmt(r.beta_xx),
            fmt(r.beta_zz),
            fmt_opt(r.thermal_factor),
        )?;
    }
    Ok(())
}
