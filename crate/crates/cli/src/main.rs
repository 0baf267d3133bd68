use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dipole_cli::config::IntRange;
use dipole_cli::{
    cmd_frequencies, cmd_spectrum, cmd_sweep, cmd_validate, cmd_wavefunction, parse_range,
    parse_tolerance, Format, Output, Overrides, RunConfig, EXIT_USAGE,
};
use dipole_core::Frame;

#[derive(Parser)]
#[command(
    name = "dipole",
    version,
    about = "Bound states of an induced dipole in crossed fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    frame: Option<Frame>,
    /// Largest admissible cyclotron frequency
    #[arg(long, global = true)]
    omega_cap: Option<f64>,
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Radial level or range: `2`, `1..3`, `1..=3`
    #[arg(long, global = true, value_parser = parse_range::<u32>)]
    n: Option<IntRange<u32>>,
    /// Angular momentum or range: `0`, `-2..2`
    #[arg(long, global = true, value_parser = parse_range::<i32>, allow_hyphen_values = true)]
    l: Option<IntRange<i32>>,
    /// Which allowed frequency to use, counting from the smallest
    #[arg(long, global = true)]
    root_index: Option<usize>,
    /// Samples for `wavefunction`, nodes of the eigensolver grid for `validate`
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Override a tolerance, e.g. `ode_residual=1e-9` (repeatable)
    #[arg(long = "tolerance", global = true, value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Energies and allowed frequencies per (n, l)
    Spectrum,
    /// Allowed cyclotron frequencies with the method used and |b_{n+1}|
    Frequencies,
    /// Samples of the radial wavefunction
    Wavefunction,
    /// Check the closed forms against the numerical oracles
    Validate,
    /// Spectrum over the values of one parameter
    Sweep,
}

/// Defaults, then the config file, then flags.
fn load(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        frame: cli.frame,
        omega_cap: cli.omega_cap,
        format: cli.format,
        out: cli.out.clone(),
        n: cli.n,
        l: cli.l,
        root_index: cli.root_index,
        samples: cli
            .grid_points
            .filter(|_| matches!(cli.command, Command::Wavefunction)),
        grid_points: cli
            .grid_points
            .filter(|_| matches!(cli.command, Command::Validate)),
        tolerances: cli.tolerances.clone(),
    };
    overrides.apply(&mut cfg).map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn emit(output: &Output, cfg: &RunConfig) -> i32 {
    for line in &output.diagnostics {
        eprintln!("dipole: {line}");
    }
    if !output.body.is_empty() {
        match &cfg.out {
            Some(path) => {
                if let Err(err) = std::fs::write(path, &output.body) {
                    eprintln!("dipole: cannot write {}: {err}", path.display());
                    return EXIT_USAGE;
                }
            }
            None => print!("{}", output.body),
        }
    }
    output.code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() {
                EXIT_USAGE as u8
            } else {
                0
            });
        }
    };
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("dipole: {message}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let output = match cli.command {
        Command::Spectrum => cmd_spectrum(&cfg),
        Command::Frequencies => cmd_frequencies(&cfg),
        Command::Wavefunction => cmd_wavefunction(&cfg),
        Command::Validate => cmd_validate(&cfg),
        Command::Sweep => cmd_sweep(&cfg),
    };
    ExitCode::from(emit(&output, &cfg) as u8)
}
