//! Reproduction harness: test functions, the comparison operator, error
//! norms, evaluation counts, experiments and file output.

pub mod comparison;
pub mod counting;
pub mod errors;
pub mod experiment;
pub mod export;
pub mod functions;
pub mod tables;
