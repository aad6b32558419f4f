//! Runs named checks of the Hecke-module identities over configured models
//! and emits machine-readable reports.

pub mod checks;
pub mod config;
pub mod context;
pub mod registry;
pub mod report;
pub mod runner;

pub use config::{ConfigError, Format, RawConfig, RunConfig};
pub use context::{CheckError, Ctx, Outcome};
pub use registry::{CheckEntry, CHECKS};
pub use report::{CheckRecord, InconclusiveKind, Provenance, Report, Status, Summary};
pub use runner::{run_checks, run_grid};
