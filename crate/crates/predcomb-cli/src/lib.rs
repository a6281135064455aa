//! Batch workbench around `predcomb-core`: named verification suites,
//! quantitative tables, narrative demos, and JSON/CSV file formats.

pub mod demos;
pub mod formats;
pub mod suites;
pub mod tables;

pub use suites::{run_suite, SuiteReport, SUITE_NAMES};
