//! Simulation runs, L-sweeps, spectra and identity verification on top of
//! `ksbesov-core`.

pub mod config;
pub mod error;
pub mod fit;
pub mod run;
pub mod snapshot;
pub mod spectrum;
pub mod structure;
pub mod sweep;
pub mod verify;

pub use error::{HarnessError, Result};
