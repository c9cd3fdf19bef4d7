//! Configuration parsing, sweep execution and CSV emission for
//! distance/temperature scans of the magnetic Casimir-Polder free energy,
//! Green-tensor components and atomic polarizability.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, ConfigError, MethodKind, StateKind, SweepConfig};
pub use output::{
    write_free_energy_csv, write_green_csv, write_polarizability_csv, CsvMeta, FREE_ENERGY_HEADER,
    GREEN_HEADER, POLARIZABILITY_HEADER,
};
pub use sweep::{
    normalization_reference, run_sweep, run_sweep_green, run_sweep_polarizability, GreenRow,
    PolarizabilityRow, RowStatus, SweepError, SweepOutput, SweepRow,
};
