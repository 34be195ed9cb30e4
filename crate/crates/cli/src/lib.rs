//! Harness around `kmreduce-core`: seeded checks, suites, degeneration
//! runs and radius sweeps, with JSON reports whose numbers are all decimal
//! strings.

pub mod check;
pub mod config;
pub mod report;
pub mod suite;

pub use check::{check, evaluate, rel_error, CheckMeta, Evaluation};
pub use config::{ConfigFile, IdentityFilter, SuiteConfig};
pub use report::{CheckReport, ParamsJson, Summary, SuiteReport, SCHEMA_VERSION};
pub use suite::{radius_sweep, render_sweep, run_degenerations, run_params, run_suite, SweepRow};
