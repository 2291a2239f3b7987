//! Library surface of the `qdot` command-line tool: configuration parsing,
//! figure presets and output rendering. The binary in `main.rs` is a thin
//! dispatcher over these.

pub mod config;
pub mod output;
pub mod presets;
