use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use magcp_cli::{
    parse_config, run_sweep, run_sweep_green, run_sweep_polarizability, write_free_energy_csv,
    write_green_csv, write_polarizability_csv, CsvMeta,
};

/// Distance/temperature sweeps of the magnetic Casimir-Polder interaction
/// near a planar metal surface. Results go to CSV with a '#'-prefixed
/// metadata block.
#[derive(Parser)]
#[command(name = "magcp", version)]
struct Args {
    /// Path to the JSON sweep configuration
    #[arg(long)]
    config: PathBuf,

    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,

    /// Override the config-level relative tolerance
    #[arg(long)]
    tolerance: Option<f64>,

    /// Quantity to compute per grid point
    #[arg(long, value_enum, default_value_t = Quantity::FreeEnergy)]
    quantity: Quantity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Quantity {
    #[value(name = "free_energy")]
    FreeEnergy,
    #[value(name = "green")]
    Green,
    #[value(name = "polarizability")]
    Polarizability,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

fn main() -> ExitCode {
    let args = Args::parse();

    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_IO);
        }
    };

    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(tol) = args.tolerance {
        if tol.is_nan() || tol <= 0.0 || tol >= 1.0 {
            eprintln!("error: --tolerance must lie in (0, 1), got {tol}");
            return ExitCode::from(EXIT_CONFIG);
        }
        cfg.tol = tol;
    }

    let meta = CsvMeta {
        config_sha256: hex_digest(text.as_bytes()),
        mu_j_per_t: cfg.atom.mu(),
    };

    let mut buf = Vec::new();
    let render = match args.quantity {
        Quantity::FreeEnergy => match run_sweep(&cfg) {
            Ok(out) => write_free_energy_csv(&mut buf, &out.rows, &meta),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        Quantity::Green => write_green_csv(&mut buf, &run_sweep_green(&cfg), &meta),
        Quantity::Polarizability => {
            write_polarizability_csv(&mut buf, &run_sweep_polarizability(&cfg), &meta)
        }
    };
    if let Err(e) = render {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_IO);
    }

    let written = match &args.output {
        Some(path) => fs::write(path, &buf).map_err(|e| (path.display().to_string(), e)),
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            w.write_all(&buf)
                .and_then(|()| w.flush())
                .map_err(|e| ("stdout".to_string(), e))
        }
    };
    if let Err((target, e)) = written {
        eprintln!("error: cannot write {target}: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::SUCCESS
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
