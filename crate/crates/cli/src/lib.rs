//! Command-line front end for the dipole spectrum library: configuration,
//! output encoding and the subcommands.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod table;
pub mod validate;

pub use commands::{
    cmd_frequencies, cmd_spectrum, cmd_sweep, cmd_validate, cmd_wavefunction, Output, EXIT_NO_ROOT,
    EXIT_OK, EXIT_USAGE, EXIT_VALIDATION,
};
pub use config::{parse_range, parse_tolerance, ConfigError, Format, Overrides, RunConfig};
pub use table::{parse_spectrum_json, DecodeError};
