//! Bundled sample programs.

/// Averages five grades read from input.
pub const AVERAGE: &str = include_str!("../examples/programs/average.phx");
