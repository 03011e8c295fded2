//! Experiment driver behind the `emi` binary: run configuration, cell
//! conductivity layouts, parameter sweeps, and table/plot emission.

pub mod config;
pub mod experiments;
pub mod output;
pub mod plots;
pub mod sigma;
