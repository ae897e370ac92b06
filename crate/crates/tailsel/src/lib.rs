//! Command-line runner for tail-dependence feature selection: CSV input,
//! a rayon-backed executor, report formats and the subcommands.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod parallel;
pub mod report;

pub use parallel::Pool;
