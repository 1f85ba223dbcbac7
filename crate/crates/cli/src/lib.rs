//! Command-line front end for the bubble/crash simulator: configuration,
//! trajectory CSV and JSON summary export, and SVG plots.

pub mod cli;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod number;
pub mod summary;
pub mod svg;

pub use cli::run;
pub use error::CliError;
