//! File formats, report emission and the command-line front end for
//! `sseqbench-core`.

pub mod chart;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
