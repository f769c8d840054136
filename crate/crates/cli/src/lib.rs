pub mod error;
pub mod format;
pub mod harness;
pub mod report;
