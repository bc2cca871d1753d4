//! Engine room for the `checkless` command-line tool.
//!
//! The binary in `main.rs` is a thin argument-parsing shell; the actual
//! machinery lives here so that every engine — deterministic input
//! generation, three-way difference testing, variant benchmarking — is
//! callable and testable in-process.

pub mod bench;
pub mod corpus;
pub mod difftest;
