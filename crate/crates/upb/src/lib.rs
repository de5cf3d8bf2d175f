//! Command-line layer over `upb_core`: fixture resolution, JSON artifacts,
//! seeded sampling sweeps and the subcommands of the `upb` binary.
//!
//! Every subcommand is a plain function from an argument struct to an
//! [`Outcome`], so tests drive the same code paths as the binary.

pub mod artifacts;
pub mod formats;
pub mod report;
pub mod sweep;

pub use report::Outcome;
