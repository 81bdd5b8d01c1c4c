//! Experiment runner for drift-Laplacian spectra: configuration, caching,
//! bound evaluation and reports on top of `driftlap-core`.

pub mod cache;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod expr;
pub mod model;
pub mod report;
pub mod runner;

pub use error::{LabError, Result};
