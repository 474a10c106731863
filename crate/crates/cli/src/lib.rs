//! Command-line front end for the `minorforge` library: graph and model
//! files, extraction and verification commands, DOT export and seeded
//! experiment sweeps with JSON reports.

pub mod cli;
pub mod dot;
pub mod experiment;
pub mod format;
