//! Reproducible experiment driver for the SGUM games: config ingestion,
//! seeded scenario generation, sweep execution, CSV emission, and a run
//! manifest that replays byte-identically.

pub mod config;
pub mod experiments;
