//! Command implementations behind the `d2d-underlay` binary.

pub mod commands;
pub mod config;
pub mod instance;
pub mod kv;
pub mod report;
