//! Command-line front end for `qcollide`: TOML experiment files, figure
//! presets and CSV output.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod selfcheck;
