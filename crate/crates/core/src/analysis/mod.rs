//! Truncation-error profiles and bounds, and the operation-count benchmark.

mod bench;
mod truncation;

pub use bench::{bench_structured, random_centro, random_skew, spectrum_discrepancy, BenchOp, BenchReport, BenchRow};
pub use truncation::{end_center_ratio, error_bounds, truncation_profile, ErrorBounds, TestFunction, TruncationReport};
