//! File formats, configuration and the command-line front end for
//! `deltamix-core`.

pub mod artifact;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod notation;
pub mod spec_file;
pub mod tree_file;
pub mod views;

pub use config::RunConfig;
pub use error::{CliError, Result};
