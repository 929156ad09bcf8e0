//! Spinor files, randomized verification suites and machine-readable reports.

mod io;
mod report;
mod suite;

pub use io::{load_spinor, save_spinor, spinor_from_json, spinor_to_json, SPINOR_FORMAT};
pub use report::{CheckRecord, CheckReport, Params, Status, Summary, Timing, REPORT_FORMAT};
pub use suite::{run_suite, SuiteConfig, SuiteName, DEFAULT_SEED, MAX_SUITE_DIMENSION};
