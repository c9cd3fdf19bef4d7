//! Sweep configuration.
//!
//! JSON schema with explicit SI units in the key names; the parameter space
//! spans more than twenty orders of magnitude, so implicit units are the
//! dominant foreseeable bug. Unknown keys are rejected.
//!
//! ```json
//! {
//!   "material": { "kind": "drude", "omega_p_rad_s": 8.9e15, "gamma_rad_s": 8.9e13 },
//!   "atom": { "omega_m_rad_s": 3.0e9, "mu_j_per_t": 9.2740100783e-24 },
//!   "state": "thermal",
//!   "method": "equilibrium_series",
//!   "grid": { "L_min_m": 1.0e-7, "L_max_m": 3.0e-6, "points": 60, "spacing": "log" },
//!   "T_list_K": [300.0],
//!   "tol": 1.0e-8,
//!   "normalize": true
//! }
//! ```

use magcp_core::constants::BOHR_MAGNETON;
use magcp_core::{DielectricModel, TwoLevelAtom};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config validation error: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Validation(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    material: MaterialSpec,
    atom: AtomSpec,
    state: StateKind,
    method: MethodKind,
    grid: GridSpec,
    #[serde(default, rename = "T_list_K")]
    t_list_k: Vec<f64>,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default)]
    normalize: bool,
}

fn default_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum MaterialSpec {
    Drude {
        omega_p_rad_s: f64,
        gamma_rad_s: f64,
    },
    Plasma {
        omega_p_rad_s: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomSpec {
    omega_m_rad_s: f64,
    #[serde(default)]
    mu_j_per_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Thermal,
    Ground,
    Excited,
}

impl StateKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Thermal => "thermal",
            Self::Ground => "ground",
            Self::Excited => "excited",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum MethodKind {
    #[serde(rename = "equilibrium_series")]
    EquilibriumSeries,
    #[serde(rename = "zero_T_integral")]
    ZeroTIntegral,
    #[serde(rename = "eq1_full")]
    Eq1Full,
    #[serde(rename = "eq6_approx")]
    Eq6Approx,
}

impl MethodKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::EquilibriumSeries => "equilibrium_series",
            Self::ZeroTIntegral => "zero_T_integral",
            Self::Eq1Full => "eq1_full",
            Self::Eq6Approx => "eq6_approx",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    #[serde(rename = "L_min_m")]
    l_min_m: f64,
    #[serde(rename = "L_max_m")]
    l_max_m: f64,
    points: usize,
    spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Spacing {
    Log,
    Linear,
}

/// Fully validated sweep configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: DielectricModel,
    pub atom: TwoLevelAtom,
    pub state: StateKind,
    pub method: MethodKind,
    /// Distance grid, ascending, m.
    pub l_grid: Vec<f64>,
    /// Temperatures in config order, K. Empty for the zero-T method.
    pub t_list: Vec<f64>,
    pub tol: f64,
    pub normalize: bool,
}

/// Parse and validate a JSON configuration document.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;

    let model = match raw.material {
        MaterialSpec::Drude {
            omega_p_rad_s,
            gamma_rad_s,
        } => DielectricModel::drude(omega_p_rad_s, gamma_rad_s)
            .map_err(|e| invalid(format!("material: {e}")))?,
        MaterialSpec::Plasma { omega_p_rad_s } => {
            DielectricModel::plasma(omega_p_rad_s).map_err(|e| invalid(format!("material: {e}")))?
        }
    };

    let mu = raw.atom.mu_j_per_t.unwrap_or(BOHR_MAGNETON);
    let atom =
        TwoLevelAtom::new(raw.atom.omega_m_rad_s, mu).map_err(|e| invalid(format!("atom: {e}")))?;

    let compatible = match raw.state {
        StateKind::Thermal => matches!(
            raw.method,
            MethodKind::EquilibriumSeries | MethodKind::ZeroTIntegral
        ),
        StateKind::Ground => matches!(raw.method, MethodKind::Eq1Full | MethodKind::Eq6Approx),
        // Eq6 is a ground-state expansion; the excited state goes through
        // the full state-resolved form
        StateKind::Excited => matches!(raw.method, MethodKind::Eq1Full),
    };
    if !compatible {
        return Err(invalid(format!(
            "state '{}' is incompatible with method '{}'",
            raw.state.label(),
            raw.method.label()
        )));
    }

    let g = raw.grid;
    if g.l_min_m <= 0.0 || !g.l_min_m.is_finite() {
        return Err(invalid("grid: L_min_m must be positive"));
    }
    if g.l_min_m > g.l_max_m {
        return Err(invalid("grid: L_min_m must not exceed L_max_m"));
    }
    if g.points < 1 {
        return Err(invalid("grid: points must be at least 1"));
    }
    let l_grid = build_grid(&g);

    if raw.method == MethodKind::ZeroTIntegral {
        if !raw.t_list_k.is_empty() {
            return Err(invalid(
                "T_list_K must be empty for method 'zero_T_integral' (rows carry T = 0)",
            ));
        }
    } else {
        if raw.t_list_k.is_empty() {
            return Err(invalid("T_list_K must contain at least one temperature"));
        }
        if raw.t_list_k.iter().any(|t| *t <= 0.0 || !t.is_finite()) {
            return Err(invalid("T_list_K entries must be positive"));
        }
    }

    if raw.tol.is_nan() || raw.tol <= 0.0 || raw.tol >= 1.0 {
        return Err(invalid("tol must lie in (0, 1)"));
    }

    Ok(SweepConfig {
        model,
        atom,
        state: raw.state,
        method: raw.method,
        l_grid,
        t_list: raw.t_list_k,
        tol: raw.tol,
        normalize: raw.normalize,
    })
}

fn build_grid(g: &GridSpec) -> Vec<f64> {
    if g.points == 1 {
        return vec![g.l_min_m];
    }
    let n = g.points;
    (0..n)
        .map(|i| {
            let frac = i as f64 / (n - 1) as f64;
            match g.spacing {
                Spacing::Log => g.l_min_m * (g.l_max_m / g.l_min_m).powf(frac),
                Spacing::Linear => g.l_min_m + (g.l_max_m - g.l_min_m) * frac,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIG1_DRUDE: &str = r#"{
        "material": { "kind": "drude", "omega_p_rad_s": 8.9e15, "gamma_rad_s": 8.9e13 },
        "atom": { "omega_m_rad_s": 3.0e9 },
        "state": "thermal",
        "method": "equilibrium_series",
        "grid": { "L_min_m": 1.0e-7, "L_max_m": 3.0e-6, "points": 5, "spacing": "log" },
        "T_list_K": [300.0]
    }"#;

    #[test]
    fn fig1_style_config_is_accepted_with_defaults() {
        let cfg = parse_config(FIG1_DRUDE).unwrap();
        assert_eq!(cfg.model.omega_p(), 8.9e15);
        assert_eq!(cfg.model.gamma(), 8.9e13);
        assert_eq!(cfg.atom.mu(), BOHR_MAGNETON);
        assert_eq!(cfg.tol, 1e-8);
        assert!(!cfg.normalize);
        assert_eq!(cfg.l_grid.len(), 5);
        assert!(cfg.l_grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn negative_gamma_is_rejected() {
        let text = FIG1_DRUDE.replace("8.9e13", "-8.9e13");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Validation(_)), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = FIG1_DRUDE.replace("\"tol\"", "\"tolerance\"");
        let with_extra = FIG1_DRUDE.replace(
            "\"T_list_K\": [300.0]",
            "\"T_list_K\": [300.0], \"mystery\": 1",
        );
        assert!(matches!(
            parse_config(&with_extra),
            Err(ConfigError::Parse(_))
        ));
        let _ = text;
    }

    #[test]
    fn state_method_compatibility_is_enforced() {
        let bad = FIG1_DRUDE.replace("\"thermal\"", "\"ground\"");
        assert!(matches!(
            parse_config(&bad),
            Err(ConfigError::Validation(_))
        ));
        let good = FIG1_DRUDE
            .replace("\"thermal\"", "\"ground\"")
            .replace("equilibrium_series", "eq1_full");
        assert!(parse_config(&good).is_ok());
        let excited_eq6 = FIG1_DRUDE
            .replace("\"thermal\"", "\"excited\"")
            .replace("equilibrium_series", "eq6_approx");
        assert!(matches!(
            parse_config(&excited_eq6),
            Err(ConfigError::Validation(_))
        ));
    }

    #[test]
    fn zero_t_method_forbids_temperature_list() {
        let bad = FIG1_DRUDE.replace("equilibrium_series", "zero_T_integral");
        assert!(matches!(
            parse_config(&bad),
            Err(ConfigError::Validation(_))
        ));
        let good = bad.replace("\"T_list_K\": [300.0]", "\"T_list_K\": []");
        let cfg = parse_config(&good).unwrap();
        assert!(cfg.t_list.is_empty());
    }

    #[test]
    fn grid_invariants() {
        let bad = FIG1_DRUDE.replace("\"points\": 5", "\"points\": 0");
        assert!(parse_config(&bad).is_err());
        let swapped = FIG1_DRUDE
            .replace("1.0e-7", "5.0e-6")
            .replace("3.0e-6", "1.0e-6");
        assert!(parse_config(&swapped).is_err());
        let single = FIG1_DRUDE
            .replace("\"points\": 5", "\"points\": 1")
            .replace("3.0e-6", "1.0e-7");
        assert_eq!(parse_config(&single).unwrap().l_grid, vec![1.0e-7]);
    }

    #[test]
    fn linear_spacing_is_supported() {
        let text = FIG1_DRUDE.replace("\"log\"", "\"linear\"");
        let cfg = parse_config(&text).unwrap();
        let step = cfg.l_grid[1] - cfg.l_grid[0];
        for w in cfg.l_grid.windows(2) {
            assert!(((w[1] - w[0]) - step).abs() < 1e-12 * step);
        }
    }
}
