//! Command-line companion to `localent-core`: CSV figure sweeps,
//! single-point density queries, two-qubit reduction dumps, the extraction
//! simulation and the full validation sweep.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod output;
pub mod physics;
pub mod runner;
