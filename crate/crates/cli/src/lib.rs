//! Front end for eqfix: example and corpus files, the benchmark harness and
//! the command implementations behind the `eqfix` binary.

pub mod bench;
pub mod commands;
pub mod corpus;
